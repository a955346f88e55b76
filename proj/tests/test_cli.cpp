#include <filesystem>
#include <fstream>
#include <sstream>

#include "hvlab/catalog.hpp"
#include "hvlab/cli.hpp"
#include "hvlab/io.hpp"
#include "support.hpp"

using namespace hvlab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  bool has(const std::string& text) const { return out.find(text) != std::string::npos; }
};

// Two table rows; a bare braced list of string pairs would become an object.
io::Json rows(std::initializer_list<const char*> first, std::initializer_list<const char*> second) {
  io::Json out = io::Json::array();
  for (auto r : {first, second}) {
    io::Json row = io::Json::array();
    for (const char* v : r) row.push_back(v);
    out.push_back(std::move(row));
  }
  return out;
}

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Scratch directory holding catalog exports.
class Workspace {
 public:
  Workspace() {
    dir_ = fs::temp_directory_path() / ("hvlab-cli-" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    write("table1.box.json", io::dump(io::box_to_json(catalog::table1_box())));
    write("pr.box.json", io::dump(io::box_to_json(catalog::pr_box())));
    write("noise.box.json", io::dump(io::box_to_json(catalog::noise_box())));
    write("signalling.box.json", io::dump(io::box_to_json(catalog::signalling_box())));
    write("appendix_a.model.json", io::dump(io::model_to_json(catalog::appendix_a_model())));
    write("classical.model.json", io::dump(io::model_to_json(catalog::classical_model())));
    write("pr_extension.model.json", io::dump(io::model_to_json(catalog::pr_extension_model())));
    write("chsh.coeff.json", io::dump(io::expression_to_json(chsh())));
  }
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
    return path(name);
  }

 private:
  fs::path dir_;
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("check") {
  Workspace w;
  Run r = run({"check", w.path("table1.box.json")});
  CHECK(r.code == 0);
  CHECK(r.has("no-signalling: true"));

  r = run({"check", w.path("signalling.box.json")});
  CHECK(r.code == 1);
  CHECK(r.has("witness: alice a=0 x=0"));

  r = run({"check", w.path("appendix_a.model.json")});
  CHECK(r.code == 0);
  CHECK(r.has("local: true, trivial: false, nontrivial_weight: 1-1/2*sqrt2"));

  r = run({"check", w.path("appendix_a.model.json"), "--against", w.path("table1.box.json")});
  CHECK(r.code == 0);
  CHECK(r.has("nontrivial_weight: 1-1/2*sqrt2"));

  io::Json bad = io::model_to_json(catalog::appendix_a_model());
  // the (-1,-1) kernel becomes X = B, Y = A on the CHSH labels (by index)
  bad["pairs"][4]["p"]["0|1"] = rows({"1", "0"}, {"0", "0"});
  bad["pairs"][4]["p"]["0|3"] = rows({"0", "0"}, {"1", "0"});
  bad["pairs"][4]["p"]["2|1"] = rows({"0", "1"}, {"0", "0"});
  bad["pairs"][4]["p"]["2|3"] = rows({"0", "0"}, {"0", "1"});
  r = run({"check", w.write("signalling.model.json", io::dump(bad))});
  CHECK(r.code == 1);
  CHECK(r.has("locality witness: pair (-1,-1)"));

  r = run({"check", w.path("pr_extension.model.json")});
  CHECK(r.code == 0);
  CHECK(r.has("W marginalized"));

  io::Json invalid = io::box_to_json(catalog::noise_box());
  invalid["p"]["0|1"][0][0] = "1/2";
  r = run({"check", w.write("invalid.box.json", io::dump(invalid))});
  CHECK(r.code == 2);
  CHECK(r.has("valid: false"));
}

TEST_CASE("bell") {
  Workspace w;
  Run r = run({"bell", "chsh", w.path("table1.box.json")});
  CHECK(r.code == 0);
  CHECK(r.has("value: 2*sqrt2, local_bound: 2, ns_bound: 4"));
  CHECK(run({"bell", "chsh", w.path("pr.box.json")}).has("value: 4"));
  CHECK(run({"bell", "chsh", w.path("noise.box.json")}).has("value: 0"));
  CHECK(run({"bell", w.path("chsh.coeff.json"), w.path("pr.box.json")}).has("value: 4"));
  r = run({"bell", "chsh", w.path("signalling.box.json")});
  CHECK(r.code == 2);
  CHECK(r.err.find("SpaceMismatch") != std::string::npos);
}

TEST_CASE("decompose") {
  Workspace w;
  Run r = run({"decompose", w.path("table1.box.json"), "--verify", "--emit-model", w.path("out.model.json")});
  CHECK(r.code == 0);
  CHECK(r.has("local_content: 2-1*sqrt2"));
  CHECK(r.has("decomposition-based"));
  CHECK(r.has("verification: passed"));
  CHECK(run({"model", "verify", w.path("out.model.json"), "--against", w.path("table1.box.json")}).code == 0);
  CHECK(run({"check", w.path("out.model.json")}).has("nontrivial_weight: 2-1*sqrt2"));

  CHECK(run({"decompose", w.path("pr.box.json")}).has("local_content: 0"));
  r = run({"decompose", w.path("signalling.box.json")});
  CHECK(r.code == 1);
  CHECK(r.has("signalling input: no local hidden variable model exists"));
}

TEST_CASE("model") {
  Workspace w;
  CHECK(run({"model", "verify", w.path("appendix_a.model.json"), "--against", w.path("table1.box.json")}).code == 0);
  Run r = run({"model", "verify", w.path("appendix_a.model.json"), "--against", w.path("pr.box.json")});
  CHECK(r.code == 1);
  CHECK(r.has("differs at"));

  r = run({"model", "guess", w.path("appendix_a.model.json"), "--side", "A"});
  CHECK(r.code == 0);
  CHECK(r.has("a=0: 1-1/4*sqrt2, a=2: 1-1/4*sqrt2"));
  CHECK(run({"model", "guess", w.path("appendix_a.model.json"), "--side", "B"}).has("b=1: 1-1/4*sqrt2, b=3: 1-1/4*sqrt2"));
  CHECK(run({"model", "guess", w.path("appendix_a.model.json"), "--side", "C"}).code == 2);

  r = run({"model", "first-mover", w.path("appendix_a.model.json")});
  CHECK(r.code == 0);
  CHECK(r.has("B independent of (X,A,U,V): true"));
  CHECK(run({"model", "first-mover", w.path("appendix_a.model.json"), "--pa", "1/3,2/3", "--pb", "1/4,3/4"}).code == 0);
  CHECK(run({"model", "first-mover", w.path("appendix_a.model.json"), "--pa", "1/3"}).code == 2);

  r = run({"model", "marginalize", w.path("pr_extension.model.json"), "-o", w.path("folded.model.json")});
  CHECK(r.code == 0);
  const auto folded = io::model_from_json(io::read_json(w.path("folded.model.json")));
  REQUIRE(std::holds_alternative<HiddenVariableModel>(folded));
  CHECK(std::get<HiddenVariableModel>(folded).kernels[0] == catalog::pr_box());
  CHECK(run({"check", w.path("folded.model.json")}).has("local: true"));
}

TEST_CASE("non-local model reports NotLocal on guess") {
  Workspace w;
  // the first W kernel on its own: it signals
  io::Json doc = io::model_to_json(catalog::pr_extension_model());
  io::Json p = doc["pairs"][0]["w_extension"][0]["p"];
  doc["pairs"][0].erase("w_extension");
  doc["pairs"][0]["p"] = p;
  const Run r = run({"model", "guess", w.write("nonlocal.model.json", io::dump(doc)), "--side", "A"});
  CHECK(r.code == 1);
  CHECK(r.err.find("NotLocal") != std::string::npos);
}

TEST_CASE("catalog and demos") {
  Run r = run({"catalog", "list"});
  CHECK(r.code == 0);
  CHECK(r.has("appendix-a"));
  r = run({"catalog", "show", "alpha"});
  CHECK(r.out == "1/4-1/8*sqrt2\n");
  r = run({"catalog", "show", "table1"});
  CHECK(io::box_from_json(io::parse_json(r.out)) == catalog::table1_box());
  CHECK(run({"catalog", "show", "nope"}).code == 2);

  r = run({"demo", "appendix-a"});
  CHECK(r.code == 0);
  const std::string last = "nontrivial_weight: 1-1/2*sqrt2; max_local_content: 2-1*sqrt2\n";
  REQUIRE(r.out.size() > last.size());
  CHECK(r.out.substr(r.out.size() - last.size()) == last);
  r = run({"demo", "appendix-b"});
  CHECK(r.code == 0);
  CHECK(r.has("no local model possible"));
  CHECK(run({"demo", "unknown"}).code == 2);
}

TEST_CASE("json format") {
  Workspace w;
  Run r = run({"--format", "json", "bell", "chsh", w.path("table1.box.json")});
  CHECK(r.code == 0);
  io::Json j = io::parse_json(r.out);
  CHECK(j["value"] == "2*sqrt2");
  CHECK(j["value_approx"].is_number());
  CHECK(j["local_bound"] == "2");
  CHECK(j["ns_bound"] == "4");

  r = run({"check", w.path("appendix_a.model.json"), "--format=json"});
  j = io::parse_json(r.out);
  CHECK(j["nontrivial_weight"] == "1-1/2*sqrt2");
  CHECK(j["local"] == true);
  CHECK(j["trivial"] == false);

  r = run({"--format", "json", "decompose", w.path("signalling.box.json")});
  CHECK(r.code == 1);
  j = io::parse_json(r.out);
  CHECK(j["witness"]["side"] == "alice");

  r = run({"--format", "json", "demo", "appendix-a"});
  j = io::parse_json(r.out);
  CHECK(j["max_local_content"] == "2-1*sqrt2");
  CHECK(j["passed"] == true);
  CHECK(run({"--format", "xml", "demo", "appendix-a"}).code == 2);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"check"}).code == 2);
  CHECK(run({"check", "/nonexistent/file.json"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"model"}).code == 2);
}

TEST_CASE("fuzzed files exit 2 and never crash") {
  Workspace w;
  std::mt19937_64 rng(83);
  std::uniform_int_distribution<int> byte(0, 255), len(0, 300);
  const std::string path = w.path("fuzz.json");
  for (int i = 0; i < 300; ++i) {
    std::string text(static_cast<std::size_t>(len(rng)), '\0');
    for (auto& ch : text) ch = static_cast<char>(byte(rng));
    w.write("fuzz.json", text);
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"check", path}, {"decompose", path}, {"bell", "chsh", path},
          {"model", "guess", path}}) {
      CHECK(run(args).code == 2);
    }
  }
  // mutated valid files: any exit code in {0,1,2}, no escape
  const std::string seed = io::dump(io::model_to_json(catalog::appendix_a_model()));
  std::uniform_int_distribution<std::size_t> at(0, seed.size() - 1);
  for (int i = 0; i < 300; ++i) {
    std::string text = seed;
    text[at(rng)] = "0123456789/-+*{}[]\",s"[i % 21];
    w.write("fuzz.json", text);
    const int code = run({"check", path}).code;
    CHECK((code == 0 || code == 1 || code == 2));
  }
}

}  // TEST_SUITE
