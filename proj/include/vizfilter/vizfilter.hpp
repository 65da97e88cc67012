#pragma once

#include "vizfilter/color.hpp"
#include "vizfilter/config.hpp"
#include "vizfilter/detector.hpp"
#include "vizfilter/geometry.hpp"
#include "vizfilter/grammar.hpp"
#include "vizfilter/interpreter.hpp"
#include "vizfilter/library.hpp"
#include "vizfilter/llm_client.hpp"
#include "vizfilter/nl_request.hpp"
#include "vizfilter/offline_synth.hpp"
#include "vizfilter/program.hpp"
#include "vizfilter/program_json.hpp"
#include "vizfilter/recognizers.hpp"
#include "vizfilter/registry.hpp"
#include "vizfilter/repair.hpp"
#include "vizfilter/scene.hpp"
#include "vizfilter/scene_graph.hpp"
#include "vizfilter/summary.hpp"
#include "vizfilter/validate.hpp"
