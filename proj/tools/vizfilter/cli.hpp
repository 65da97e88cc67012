#pragma once

// Command-line front end. Exit codes:
//   0 ok, 1 usage or library error, 2 program syntax error,
//   3 unsupported target, 4 scene I/O error, 5 language-model error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vizfilter/vizfilter.hpp"

namespace vizfilter::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kSyntax = 2,
  kUnsupported = 3,
  kSceneIo = 4,
  kLlm = 5,
};

/// Error carrying its exit code; thrown inside command handlers.
struct Failure {
  int code;
  std::string message;
};

class App {
 public:
  App(std::istream& in, std::ostream& out, std::ostream& err) : in_(in), out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    cfg_ = config_from_environment();
    CLI::App app{"Visual information filter programs: write, generate and run find/on filters."};
    app.name("vizfilter");
    app.fallthrough();
    app.require_subcommand(1);
    std::string registry_path, lib_path;
    app.add_option("--registry", registry_path, "Registry JSON file (default: built-in)");
    app.add_option("--lib", lib_path, "Program library directory (env VIZFILTER_LIB)");

    auto* validate = app.add_subcommand("validate", "Parse and check a program");
    std::string program_arg;
    validate->add_option("program", program_arg, "Program text, program file, or library name")->required();

    auto* run_cmd = app.add_subcommand("run", "Run a program over an annotated scene");
    std::string scene_path, frame_id;
    bool brief = false;
    std::size_t debounce = cfg_.debounce_n;
    run_cmd->add_option("program", program_arg, "Program text, program file, or library name")->required();
    run_cmd->add_option("--scene", scene_path, "Annotation JSON file")->required();
    run_cmd->add_flag("--brief", brief, "Short announcements without parent and position");
    run_cmd->add_option("--debounce", debounce, "Repeat an unchanged announcement after N frames")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--frame", frame_id, "Only run this frame");

    auto* explore = app.add_subcommand("explore", "List scene items and generate a program from one");
    std::string select, save_name;
    bool force = false;
    explore->add_option("--scene", scene_path, "Annotation JSON file")->required();
    explore->add_option("--frame", frame_id, "Frame to explore (default: first)");
    explore->add_option("--select", select, "Item number or id (omit to choose interactively)");
    explore->add_option("--save", save_name, "Save the generated program under this name");
    explore->add_flag("--force", force, "Overwrite an existing library entry");

    auto* ask = app.add_subcommand("ask", "Generate a program from a question");
    std::string question, modify_name, replay_dir, url;
    bool offline = false, llm = false;
    ask->add_option("question", question, "Question or follow-up")->required();
    auto* off_flag = ask->add_flag("--offline", offline, "Use the built-in rules (default)");
    ask->add_flag("--llm", llm, "Ask the configured language model")->excludes(off_flag);
    ask->add_option("--modify", modify_name, "Library program to modify with the question");
    ask->add_option("--save", save_name, "Save the result under this name");
    ask->add_flag("--force", force, "Overwrite an existing library entry");
    ask->add_option("--replay", replay_dir, "Answer from recorded model responses in this directory");
    ask->add_option("--url", url, "Model endpoint (env VIZFILTER_LLM_URL)");

    auto* lib = app.add_subcommand("lib", "Manage saved programs");
    lib->require_subcommand(1);
    std::string name;
    auto* lib_save = lib->add_subcommand("save", "Save a program");
    lib_save->add_option("name", name)->required();
    lib_save->add_option("program", program_arg)->required();
    lib_save->add_flag("--force", force, "Overwrite an existing entry");
    auto* lib_list = lib->add_subcommand("list", "List saved programs");
    auto* lib_show = lib->add_subcommand("show", "Show a saved program");
    lib_show->add_option("name", name)->required();
    auto* lib_delete = lib->add_subcommand("delete", "Delete a saved program");
    lib_delete->add_option("name", name)->required();

    auto* classify = app.add_subcommand("classify", "Show which text types a string matches");
    std::string sample;
    classify->add_option("text", sample)->required();

    std::vector<std::string> argv_store{"vizfilter"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out_, err_);
      return code == 0 ? kOk : kUsage;
    }

    try {
      if (!registry_path.empty()) {
        cfg_.registry_path = registry_path;
        owned_registry_ = std::make_unique<Registry>(Registry::load(registry_path));
      }
      if (!lib_path.empty()) cfg_.library_path = lib_path;
      cfg_.brief = brief;
      cfg_.debounce_n = debounce;
      if (!url.empty()) cfg_.llm_url = url;

      if (validate->parsed()) return cmd_validate(program_arg);
      if (run_cmd->parsed()) return cmd_run(program_arg, scene_path, frame_id);
      if (explore->parsed()) return cmd_explore(scene_path, frame_id, select, save_name, force);
      if (ask->parsed()) return cmd_ask(question, llm, modify_name, save_name, force, replay_dir);
      if (lib_save->parsed()) return cmd_lib_save(name, program_arg, force);
      if (lib_list->parsed()) return cmd_lib_list();
      if (lib_show->parsed()) return cmd_lib_show(name);
      if (lib_delete->parsed()) return cmd_lib_delete(name);
      if (classify->parsed()) return cmd_classify(sample);
    } catch (const Failure& f) {
      err_ << "error: " << f.message << '\n';
      return f.code;
    } catch (const ParseError& e) {
      err_ << "error: " << e.what() << '\n';
      return e.kind() == ParseError::Kind::syntax ? kSyntax : kUnsupported;
    } catch (const CodecError& e) {
      err_ << "error: " << e.what() << '\n';
      return kSyntax;
    } catch (const SceneError& e) {
      err_ << "error: " << e.what() << '\n';
      return kSceneIo;
    } catch (const LlmTransportError& e) {
      err_ << "error: " << e.what() << '\n';
      return kLlm;
    } catch (const LibraryError& e) {
      err_ << "error: " << e.what() << '\n';
      return kUsage;
    } catch (const RegistryError& e) {
      err_ << "error: " << e.what() << '\n';
      return kUsage;
    }
    return kUsage;
  }

 private:
  const Registry& registry() const { return owned_registry_ ? *owned_registry_ : Registry::builtin(); }
  Library library() const { return Library(cfg_.library_path); }

  Program load_program(const std::string& arg) const {
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) {
      std::ifstream in(arg);
      std::stringstream ss;
      ss << in.rdbuf();
      const std::string body = ss.str();
      const auto t = text::trim(body);
      if (!t.empty() && t.front() == '{') return decode_program(t, registry());
      return parse_program(t, registry());
    }
    if (Library::valid_name(arg) && library().contains(arg)) return library().load(arg, registry());
    return parse_program(arg, registry());
  }

  /// Prints unsupported slots with suggestions; true when there were any.
  bool report_unsupported(const Program& p, const ValidationReport* extra = nullptr) const {
    auto repaired = repair_program(p, registry());
    auto slots = repaired.report.unsupported_slots;
    auto suggestions = repaired.suggestions;
    if (extra)
      for (const auto& s : extra->unsupported_slots)
        if (std::find(slots.begin(), slots.end(), s) == slots.end()) {
          slots.push_back(s);
          suggestions.emplace_back();
        }
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const auto& s = slots[i];
      err_ << "unsupported: chain " << s.chain + 1 << ", item " << s.item + 1 << ": \"" << s.name << "\" ("
           << s.reason << ")";
      if (!suggestions[i].empty()) err_ << "; did you mean: " << text::join(suggestions[i], ", ");
      err_ << '\n';
    }
    return !slots.empty();
  }

  void save_to_library(const std::string& name, const Program& p, bool force) const {
    const Library lib = library();
    if (!force && lib.contains(name))
      throw Failure{kUsage, "program \"" + name + "\" already exists (use --force to overwrite)"};
    lib.save(name, p, true);
    out_ << "Saved \"" << name << "\"\n";
  }

  int cmd_validate(const std::string& arg) {
    const Program p = load_program(arg);
    if (report_unsupported(p)) return kUnsupported;
    out_ << summarize(p) << '\n';
    return kOk;
  }

  std::vector<SceneFrame> load_frames(const std::string& scene_path, const std::string& frame_id) const {
    auto frames = load_scene(scene_path);
    if (frame_id.empty()) return frames;
    std::vector<SceneFrame> picked;
    for (auto& f : frames)
      if (f.frame_id == frame_id) picked.push_back(std::move(f));
    if (picked.empty()) throw Failure{kSceneIo, "scene has no frame \"" + frame_id + "\""};
    return picked;
  }

  int cmd_run(const std::string& arg, const std::string& scene_path, const std::string& frame_id) {
    const Program p = load_program(arg);
    if (report_unsupported(p)) return kUnsupported;
    const auto frames = load_frames(scene_path, frame_id);
    const FixtureBackend backend(registry());
    const auto announcements =
        run_sequence(p, frames, backend, registry(), cfg_.debounce_n, RenderOptions{cfg_.brief});
    for (const auto& a : announcements) out_ << a.frame_id << '\t' << a.text << '\n';
    return kOk;
  }

  int cmd_explore(const std::string& scene_path, const std::string& frame_id, const std::string& select,
                  const std::string& save_name, bool force) {
    const auto frames = load_frames(scene_path, frame_id);
    if (frames.empty()) throw Failure{kSceneIo, "scene has no frames"};
    const SceneGraph graph = build_scene_graph(frames.front(), registry());
    const auto items = list_items(graph);
    out_ << "Items in frame " << frames.front().frame_id << ":\n";
    for (std::size_t i = 0; i < items.size(); ++i)
      out_ << std::string(2 + 2 * items[i].depth, ' ') << i + 1 << ". " << items[i].display << " ["
           << items[i].node_id << "]\n";
    if (items.empty()) throw Failure{kUsage, "nothing detected in this frame"};

    auto pick = [&](const std::string& s) -> std::optional<std::string> {
      const auto t = std::string(text::trim(s));
      if (!t.empty() && std::all_of(t.begin(), t.end(), text::is_digit)) {
        const auto n = std::stoul(t);
        if (n >= 1 && n <= items.size()) return items[n - 1].node_id;
        return std::nullopt;
      }
      if (graph.index_of(t)) return t;
      return std::nullopt;
    };

    std::string node_id;
    if (!select.empty()) {
      if (select == kRootNodeId && !graph.index_of(select))
        throw Failure{kUsage, "the root (whole frame) cannot be selected"};
      auto id = pick(select);
      if (!id) throw Failure{kUsage, "no item \"" + select + "\""};
      node_id = *id;
    } else {
      while (true) {
        err_ << "Select an item (number or id): " << std::flush;
        std::string line;
        if (!std::getline(in_, line)) throw Failure{kUsage, "no selection made"};
        if (auto id = pick(line)) {
          node_id = *id;
          break;
        }
        err_ << "Not an item: " << text::trim(line) << '\n';
      }
    }
    const Program p = generate_from_selection(graph, node_id);
    out_ << print_program(p) << '\n' << summarize(p) << '\n';
    if (!save_name.empty()) save_to_library(save_name, p, force);
    return kOk;
  }

  int cmd_ask(const std::string& question, bool use_llm, const std::string& modify_name,
              const std::string& save_name, bool force, const std::string& replay_dir) {
    std::optional<Program> prior;
    if (!modify_name.empty()) prior = library().load(modify_name, registry());
    NLOutcome outcome;
    if (!use_llm) {
      outcome = offline_synthesize(question, prior, registry());
    } else {
      std::unique_ptr<LlmTransport> transport;
      if (!replay_dir.empty()) {
        transport = std::make_unique<ReplayTransport>(replay_dir);
      } else {
        if (cfg_.llm_url.empty())
          throw Failure{kLlm, "no model endpoint configured (set VIZFILTER_LLM_URL or pass --url)"};
        transport = std::make_unique<HttpTransport>(cfg_.llm_url, cfg_.llm_token);
      }
      outcome = ask_llm(question, prior, registry(), *transport);
    }
    if (auto* refusal = std::get_if<NLRefusal>(&outcome)) {
      out_ << refusal->text << '\n';
      return kOk;
    }
    if (auto* failure = std::get_if<NLParseFailure>(&outcome))
      throw Failure{kLlm, "could not read the model's answer: " + failure->message};
    const auto& result = std::get<NLProgram>(outcome);
    out_ << print_program(result.program) << '\n' << summarize(result.program) << '\n';
    if (report_unsupported(result.program, &result.report)) return kUnsupported;
    if (!save_name.empty()) save_to_library(save_name, result.program, force);
    return kOk;
  }

  int cmd_lib_save(const std::string& name, const std::string& arg, bool force) {
    const Program p = load_program(arg);
    save_to_library(name, p, force);
    return kOk;
  }

  int cmd_lib_list() {
    for (const auto& e : library().list()) {
      out_ << e.name;
      try {
        out_ << '\t' << print_program(library().load(e.name, registry()));
      } catch (const LibraryError&) {
        out_ << "\t(unreadable)";
      }
      out_ << '\n';
    }
    return kOk;
  }

  int cmd_lib_show(const std::string& name) {
    const Program p = library().load(name, registry());
    out_ << summarize(p) << '\n' << print_program(p) << '\n';
    return kOk;
  }

  int cmd_lib_delete(const std::string& name) {
    library().remove(name);
    out_ << "Deleted \"" << name << "\"\n";
    return kOk;
  }

  int cmd_classify(const std::string& sample) {
    const auto kinds = classify_text(sample);
    std::vector<std::string> names;
    for (auto k : kinds) names.emplace_back(text_kind_id(k));
    out_ << "types: " << (names.empty() ? "(none)" : text::join(names, ", ")) << '\n';
    const auto best = most_specific(sample);
    out_ << "most specific: " << (best ? std::string(text_kind_id(*best)) : "any text") << '\n';
    for (auto k : kAllTextKinds)
      for (const auto& m : recognize(k, sample))
        out_ << text_kind_id(k) << "\t[" << m.start << ", " << m.end << ")\t" << m.value << '\n';
    return kOk;
  }

  std::istream& in_;
  std::ostream& out_;
  std::ostream& err_;
  Config cfg_;
  std::unique_ptr<Registry> owned_registry_;
};

inline int run(const std::vector<std::string>& args, std::istream& in = std::cin, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  return App(in, out, err).run(args);
}

}  // namespace vizfilter::cli
