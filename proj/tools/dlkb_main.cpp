#include <csignal>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "dlkb/io.hpp"
#include "dlkb/rdfxml.hpp"
#include "dlkb/reasoner.hpp"
#include "dlkb/service.hpp"
#include "dlkb/store.hpp"
#include "dlkb/text_format.hpp"

using namespace dlkb;

namespace {

// Thrown for problems the user fixes by changing the command line.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Concept expression(const std::string& text, const KnowledgeBase& kb) {
  try {
    return parse_concept(text, &kb);
  } catch (const ParseError& e) {
    throw ParseError(e.location(), e.kind(), "in expression: " + e.detail());
  }
}

void print_names(std::ostream& out, const char* label, const std::set<std::string>& names) {
  out << label << ":";
  for (const auto& n : names) out << ' ' << n;
  out << '\n';
}

int serve(const std::string& config_path) {
  const ServiceConfig config = load_config(config_path);
  auto service = Service::from_config(config);
  HttpServer http(*service);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const int port = http.bind(config.host, config.port);
  if (port < 0) throw Error("cannot listen on " + config.host + ":" + std::to_string(config.port));
  std::cerr << "listening on " << config.host << ":" << port << std::endl;
  std::thread listener([&] { http.listen(); });
  int sig = 0;
  sigwait(&signals, &sig);
  http.stop();
  listener.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Description-logic knowledge base tools"};
  app.require_subcommand(1);

  std::string kb_path, expr, format = "tree", core_path, store_path, out_path, in_path, config_path, password, to;

  auto* check = app.add_subcommand("check", "Parse a knowledge base and test its consistency");
  check->add_option("kb", kb_path)->required();

  auto* classify_cmd = app.add_subcommand("classify", "Print the inferred class hierarchy");
  classify_cmd->add_option("kb", kb_path)->required();
  classify_cmd->add_option("--format", format, "tree or pairs")->check(CLI::IsMember({"tree", "pairs"}));

  auto* sat = app.add_subcommand("sat", "Test a concept expression for satisfiability");
  sat->add_option("kb", kb_path)->required();
  sat->add_option("expr", expr)->required();

  auto* query = app.add_subcommand("query", "Equivalents, sub- and superclasses and instances of an expression");
  query->add_option("kb", kb_path)->required();
  query->add_option("expr", expr)->required();

  auto* realize_cmd = app.add_subcommand("realize", "Most specific classes of every individual");
  realize_cmd->add_option("kb", kb_path)->required();

  auto* sync = app.add_subcommand("sync", "Merge a store into a core ontology");
  sync->add_option("--core", core_path)->required();
  sync->add_option("--store", store_path)->required();
  sync->add_option("--out", out_path)->required();

  auto* convert = app.add_subcommand("convert", "Convert between native text and RDF/XML");
  convert->add_option("in", in_path)->required();
  convert->add_option("out", out_path)->required();
  convert->add_option("--to", to, "text or rdfxml; default is the other format")
      ->check(CLI::IsMember({"text", "rdfxml"}));

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP query service");
  serve_cmd->add_option("--config", config_path)->required();

  auto* hash = app.add_subcommand("hash-password", "Print the SHA-1 digest stored for a password");
  hash->add_option("password", password)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::ostream& out = std::cout;
    if (*check) {
      const KnowledgeBase kb = load_ontology(kb_path);
      if (auto n = kb.undeclared_nominal()) throw KbError("nominal names undeclared individual '" + *n + "'");
      if (!is_consistent(kb)) throw InconsistentKb();
      out << "consistent: " << kb.concept_names().size() << " classes, " << kb.role_names().size()
          << " object properties, " << kb.data_property_names().size() << " data properties, "
          << kb.individual_names().size() << " individuals, " << kb.axiom_count() << " axioms\n";
    } else if (*classify_cmd) {
      const Reasoner r(load_ontology(kb_path));
      out << (format == "pairs" ? render_pairs(r.classify()) : render_tree(r.classify()));
    } else if (*sat) {
      const KnowledgeBase kb = load_ontology(kb_path);
      out << (is_satisfiable(expression(expr, kb), kb) ? "satisfiable" : "unsatisfiable") << '\n';
    } else if (*query) {
      const KnowledgeBase kb = load_ontology(kb_path);
      const QueryAnswer a = dl_query(expression(expr, kb), kb);
      print_names(out, "equivalents", a.equivalents);
      print_names(out, "direct_subclasses", a.direct_subclasses);
      print_names(out, "subclasses", a.all_subclasses);
      print_names(out, "direct_superclasses", a.direct_superclasses);
      print_names(out, "instances", a.instances);
    } else if (*realize_cmd) {
      for (const auto& [ind, types] : realize(load_ontology(kb_path))) {
        print_names(out, ind.c_str(), types);
      }
    } else if (*sync) {
      const KnowledgeBase kb = synchronize(load_ontology(core_path), load_store(store_path));
      write_file(out_path, serialize_text(kb));
      out << "wrote " << kb.axiom_count() << " axioms to " << out_path << '\n';
    } else if (*convert) {
      const std::string text = read_file(in_path);
      const bool from_xml = looks_like_rdfxml(text);
      KnowledgeBase kb;
      try {
        kb = parse_document(text);
      } catch (const ParseError& e) {
        throw IoError(in_path + ":" + e.what());
      }
      const bool to_xml = to.empty() ? !from_xml : to == "rdfxml";
      write_file(out_path, to_xml ? export_rdfxml(kb) : serialize_text(kb));
    } else if (*serve_cmd) {
      return serve(config_path);
    } else if (*hash) {
      out << sha1_hex(password) << '\n';
    }
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "dlkb: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "dlkb: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "dlkb: " << e.what() << '\n';
    return 1;
  }
}
