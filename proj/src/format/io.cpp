#include "dlkb/io.hpp"

#include <fstream>
#include <sstream>

#include "dlkb/rdfxml.hpp"
#include "dlkb/text_format.hpp"
#include "httplib.h"

namespace dlkb {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

bool looks_like_rdfxml(std::string_view document) {
  // skip a UTF-8 byte order mark
  if (document.starts_with("\xEF\xBB\xBF")) document.remove_prefix(3);
  auto pos = document.find_first_not_of(" \t\r\n");
  return pos != std::string_view::npos && document[pos] == '<';
}

KnowledgeBase parse_document(std::string_view document) {
  return looks_like_rdfxml(document) ? import_rdfxml(document) : parse_text(document);
}

namespace {

std::string fetch_http(const std::string& url) {
  // http://host[:port]/path
  const std::string rest = url.substr(7);
  const auto slash = rest.find('/');
  const std::string authority = rest.substr(0, slash);
  const std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
  httplib::Client client("http://" + authority);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  auto res = client.Get(path);
  if (!res) throw IoError("cannot fetch '" + url + "': " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw IoError("cannot fetch '" + url + "': HTTP " + std::to_string(res->status));
  }
  return res->body;
}

}  // namespace

KnowledgeBase load_ontology(const std::string& uri, const std::filesystem::path& base) {
  if (uri.starts_with("http://")) return parse_document(fetch_http(uri));
  if (uri.starts_with("https://")) throw IoError("https is not supported: '" + uri + "'");
  std::string path = uri;
  if (path.starts_with("file://")) {
    path = path.substr(7);
  } else if (path.starts_with("file:")) {
    path = path.substr(5);
  }
  std::filesystem::path p(path);
  if (p.is_relative() && !base.empty()) p = base / p;
  const std::string text = read_file(p);
  try {
    return parse_document(text);
  } catch (const ParseError& e) {
    throw IoError(p.string() + ":" + e.what());
  } catch (const KbError& e) {
    throw IoError(p.string() + ": " + e.what());
  }
}

}  // namespace dlkb
