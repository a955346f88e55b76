#include "hvlab/cli.hpp"

#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "hvlab/catalog.hpp"
#include "hvlab/decompose.hpp"
#include "hvlab/io.hpp"
#include "hvlab/sampling.hpp"

namespace hvlab::cli {

namespace {

using io::Json;

enum class Format { text, json };

std::string approx(const Scalar& s) {
  std::ostringstream os;
  os << std::setprecision(10) << to_double(s);
  return os.str();
}

// Exact string plus a decimal "<key>_approx" companion.
void put_exact(Json& obj, const std::string& key, const Scalar& s) {
  obj[key] = format_scalar(s);
  obj[key + "_approx"] = to_double(s);
}

// Text lines and a JSON object are built side by side; one of them is printed.
class Report {
 public:
  explicit Report(std::string command) {
    json_["command"] = std::move(command);
    json_["approx_note"] = "fields ending in _approx are decimal approximations; all other numbers are exact";
  }

  void line(std::string s) { lines_.push_back(std::move(s)); }
  Json& json() { return json_; }
  Json& operator[](const std::string& key) { return json_[key]; }

  void emit(Format format, std::ostream& out) const {
    if (format == Format::json) {
      out << io::dump(json_);
      return;
    }
    for (const auto& l : lines_) out << l << '\n';
  }

 private:
  std::vector<std::string> lines_;
  Json json_ = Json::object();
};

const char* yes_no(bool b) { return b ? "true" : "false"; }

std::string cell_label(const Spaces& s, std::size_t a, std::size_t b, std::size_t x, std::size_t y) {
  return "a=" + s.settings_a[a] + ",b=" + s.settings_b[b] + ",x=" + s.outcomes_x[x] + ",y=" + s.outcomes_y[y];
}

std::string first_issue(const BehaviorReport& rep, const Spaces& s) {
  if (!rep.negative_cells.empty()) {
    const auto& c = rep.negative_cells.front();
    return "negative entry at " + cell_label(s, c.a, c.b, c.x, c.y);
  }
  if (!rep.unnormalized_rows.empty()) {
    const auto& r = rep.unnormalized_rows.front();
    return "row a=" + s.settings_a[r.a] + ",b=" + s.settings_b[r.b] + " sums to " + format_scalar(r.sum);
  }
  return "valid";
}

std::string describe_strategy(const DeterministicStrategy& st, const Spaces& s) {
  std::string out = "alice ";
  for (std::size_t a = 0; a < st.alice.size(); ++a) {
    if (a) out += ", ";
    out += "a=" + s.settings_a[a] + "->" + s.outcomes_x[st.alice[a]];
  }
  out += "; bob ";
  for (std::size_t b = 0; b < st.bob.size(); ++b) {
    if (b) out += ", ";
    out += "b=" + s.settings_b[b] + "->" + s.outcomes_y[st.bob[b]];
  }
  return out;
}

Json strategy_json(const DeterministicStrategy& st, const Spaces& s) {
  Json j = Json::object();
  Json alice = Json::object(), bob = Json::object();
  for (std::size_t a = 0; a < st.alice.size(); ++a) alice[s.settings_a[a]] = s.outcomes_x[st.alice[a]];
  for (std::size_t b = 0; b < st.bob.size(); ++b) bob[s.settings_b[b]] = s.outcomes_y[st.bob[b]];
  j["alice"] = std::move(alice);
  j["bob"] = std::move(bob);
  return j;
}

Json ns_witness_json(const NsWitness& w, const Spaces& s) {
  const bool alice = w.side == Side::alice;
  const LabelSet& own = alice ? s.settings_a : s.settings_b;
  const LabelSet& counter = alice ? s.settings_b : s.settings_a;
  const LabelSet& outcomes = alice ? s.outcomes_x : s.outcomes_y;
  Json j = Json::object();
  j["side"] = to_string(w.side);
  j["own_setting"] = own[w.own_setting];
  j["reference_counterpart"] = counter[w.reference_counterpart];
  j["other_counterpart"] = counter[w.other_counterpart];
  j["outcome"] = outcomes[w.outcome];
  j["reference_value"] = format_scalar(w.reference_value);
  j["other_value"] = format_scalar(w.other_value);
  j["description"] = describe(w, s);
  return j;
}

std::string describe_triviality(const TrivialityWitness& w, const HiddenVariableModel& m) {
  const Spaces& s = m.spaces();
  const bool alice = w.side == Side::alice;
  const std::string outcome = alice ? "x=" + s.outcomes_x[w.outcome] : "y=" + s.outcomes_y[w.outcome];
  return "pair " + m.pairs[w.pair].label() + " " + to_string(w.side) + " a=" + s.settings_a[w.a] +
         ",b=" + s.settings_b[w.b] + " " + outcome + ": kernel " + format_scalar(w.kernel_value) +
         " vs reference " + format_scalar(w.reference_value);
}

std::string describe_kernel(const Behavior& k) {
  if (auto st = as_deterministic(k)) return "deterministic, " + describe_strategy(*st, k.spaces());
  if (k.spaces() == catalog::chsh_spaces() && k == catalog::pr_box()) return "PR box";
  return is_no_signalling(k) ? "no-signalling" : "signalling";
}

// Loading.

Behavior parse_box_document(const Json& doc, const std::string& what) {
  if (io::detect_kind(doc) != io::FileKind::box) throw Error(ErrorCode::ParseError, what + " is not a box file");
  return io::box_from_json(doc);
}

Behavior load_box(const std::string& path) {
  Behavior b = parse_box_document(io::read_json(path), path);
  const auto rep = validate_behavior(b);
  if (!rep.valid()) throw Error(ErrorCode::InvalidBehavior, path + ": " + first_issue(rep, b.spaces()));
  return b;
}

// Validated model; a W extension is marginalized out (flag set).
HiddenVariableModel load_model(const std::string& path, bool* extended = nullptr) {
  const Json doc = io::read_json(path);
  if (io::detect_kind(doc) != io::FileKind::model) throw Error(ErrorCode::ParseError, path + " is not a model file");
  io::ModelDocument md = io::model_from_json(doc);
  if (extended) *extended = std::holds_alternative<ExtendedModel>(md);
  if (auto* ext = std::get_if<ExtendedModel>(&md)) {
    const auto issues = validate_extended_model(*ext);
    if (!issues.empty()) throw Error(ErrorCode::InvalidModel, path + ": " + issues.front());
    return marginalize_nonlocal(*ext);
  }
  auto& m = std::get<HiddenVariableModel>(md);
  const auto issues = validate_model(m);
  if (!issues.empty()) throw Error(ErrorCode::InvalidModel, path + ": " + issues.front());
  return m;
}

BellExpression load_expression(const std::string& arg) {
  if (arg == "chsh") return chsh();
  const Json doc = io::read_json(arg);
  if (io::detect_kind(doc) != io::FileKind::expression) {
    throw Error(ErrorCode::ParseError, arg + " is not a Bell coefficient file");
  }
  return io::expression_from_json(doc);
}

Distribution parse_distribution(const std::string& text, std::size_t n) {
  if (text.empty()) return uniform_distribution(n);
  Distribution out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_scalar(item));
  return out;
}

struct Context {
  Format format;
  std::ostream& out;
  std::ostream& err;
};

// Commands.

int cmd_check(Context& c, const std::string& path, const std::string& against) {
  const Json doc = io::read_json(path);
  const auto kind = io::detect_kind(doc);
  Report r("check");
  r["file"] = path;

  if (kind == io::FileKind::box) {
    if (!against.empty()) throw Error(ErrorCode::ParseError, "--against applies to model files only");
    const Behavior b = io::box_from_json(doc);
    const auto rep = validate_behavior(b);
    r["kind"] = "box";
    r["valid"] = rep.valid();
    if (!rep.valid()) {
      r.line("valid: false");
      r.line("issue: " + first_issue(rep, b.spaces()));
      r["issue"] = first_issue(rep, b.spaces());
      r.emit(c.format, c.out);
      c.err << "error: " << path << " is not a valid behavior\n";
      return input_error;
    }
    r.line("valid: true");
    const NsResult ns = is_no_signalling(b);
    r.line(std::string("no-signalling: ") + yes_no(ns.no_signalling));
    r["no_signalling"] = ns.no_signalling;
    r["witness"] = nullptr;
    if (ns.witness) {
      r.line("witness: " + describe(*ns.witness, b.spaces()));
      r["witness"] = ns_witness_json(*ns.witness, b.spaces());
    }
    r.emit(c.format, c.out);
    return ns ? ok : property_failed;
  }
  if (kind != io::FileKind::model) throw Error(ErrorCode::ParseError, "check expects a box or model file");

  r["kind"] = "model";
  io::ModelDocument md = io::model_from_json(doc);
  std::vector<std::string> issues;
  HiddenVariableModel m;
  const bool extended = std::holds_alternative<ExtendedModel>(md);
  if (extended) {
    issues = validate_extended_model(std::get<ExtendedModel>(md));
    if (issues.empty()) m = marginalize_nonlocal(std::get<ExtendedModel>(md));
  } else {
    m = std::get<HiddenVariableModel>(md);
    issues = validate_model(m);
  }
  r["valid"] = issues.empty();
  r["extended"] = extended;
  if (!issues.empty()) {
    r.line("valid: false");
    for (const auto& i : issues) r.line("issue: " + i);
    r["issues"] = issues;
    r.emit(c.format, c.out);
    c.err << "error: " << path << " is not a valid model\n";
    return input_error;
  }
  r.line("valid: true");
  if (extended) r.line("extension: W marginalized out before the checks");

  std::optional<Behavior> reference;
  if (!against.empty()) {
    reference = load_box(against);
    if (!(reference->spaces() == m.spaces())) {
      throw Error(ErrorCode::SpaceMismatch, "model and reference box use different spaces");
    }
  }
  const LocalityResult loc = check_locality(m);
  const TrivialityResult triv = check_triviality(m, reference);
  const Scalar weight = nontrivial_weight(m, reference);

  r.line(std::string("local: ") + yes_no(loc.local) + ", trivial: " + yes_no(triv.trivial) +
         ", nontrivial_weight: " + format_scalar(weight));
  r.line("nontrivial_weight_approx: " + approx(weight) + " (approximate)");
  r.line(std::string("reference marginals: ") + (against.empty() ? "reconstructed behavior" : against));
  r.line("note: nontrivial_weight is the total P_UV weight of hidden pairs whose outcome marginals differ "
         "from the reference marginals");
  r["local"] = loc.local;
  r["trivial"] = triv.trivial;
  put_exact(r.json(), "nontrivial_weight", weight);
  r["nontrivial_weight_definition"] =
      "total P_UV weight of hidden pairs whose outcome marginals differ from the reference marginals";
  r["reference"] = against.empty() ? "reconstructed" : against;
  r["locality_witness"] = nullptr;
  r["triviality_witness"] = nullptr;
  if (loc.witness) {
    const std::string text = "pair " + m.pairs[loc.witness->pair].label() + " " +
                             describe(loc.witness->kernel_witness, m.spaces());
    r.line("locality witness: " + text);
    Json w = ns_witness_json(loc.witness->kernel_witness, m.spaces());
    w["pair"] = m.pairs[loc.witness->pair].label();
    r["locality_witness"] = std::move(w);
  }
  if (triv.witness) {
    r.line("non-triviality witness: " + describe_triviality(*triv.witness, m));
    r["triviality_witness"] = describe_triviality(*triv.witness, m);
  }
  r.emit(c.format, c.out);
  return loc ? ok : property_failed;
}

int cmd_bell(Context& c, const std::string& expression_arg, const std::string& box_path) {
  const BellExpression e = load_expression(expression_arg);
  const Behavior b = load_box(box_path);
  if (!(e.spaces == b.spaces())) throw Error(ErrorCode::SpaceMismatch, "expression and box use different spaces");
  const Scalar value = evaluate(e, b);
  const LocalBound lb = local_bound(e);
  const Scalar ns = ns_bound(e);

  Report r("bell");
  r["expression"] = expression_arg;
  r["box"] = box_path;
  put_exact(r.json(), "value", value);
  put_exact(r.json(), "local_bound", lb.value);
  put_exact(r.json(), "ns_bound", ns);
  r["local_optimum"] = strategy_json(lb.strategy, e.spaces);
  r["exceeds_local_bound"] = value > lb.value;
  r.line("value: " + format_scalar(value) + ", local_bound: " + format_scalar(lb.value) +
         ", ns_bound: " + format_scalar(ns));
  r.line("approx: value ~ " + approx(value) + ", local_bound ~ " + approx(lb.value) + ", ns_bound ~ " +
         approx(ns) + " (decimal, approximate)");
  r.line("local optimum: " + describe_strategy(lb.strategy, e.spaces));
  r.line(std::string("exceeds local bound: ") + yes_no(value > lb.value));
  r.emit(c.format, c.out);
  return ok;
}

int cmd_decompose(Context& c, const std::string& path, const std::string& emit_model, bool verify) {
  const Behavior b = load_box(path);
  Report r("decompose");
  r["box"] = path;

  std::optional<LocalDecomposition> d;
  try {
    d = max_local_content(b);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SignallingInput) throw;
    r.line(e.message());
    r["signalling"] = true;
    r["message"] = e.message();
    const NsResult ns = is_no_signalling(b);
    if (ns.witness) {
      r.line("witness: " + describe(*ns.witness, b.spaces()));
      r["witness"] = ns_witness_json(*ns.witness, b.spaces());
    }
    r.emit(c.format, c.out);
    return property_failed;
  }

  const auto cert = verify_certificate(d->lp, d->solution);
  r["quantity"] = "maximal local content (decomposition-based)";
  r.line("maximal local content (decomposition-based): largest p with box = p L + (1-p) R, L local, R no-signalling");
  r.line("local_content: " + format_scalar(d->local_content));
  r.line("local_content_approx: " + approx(d->local_content) + " (approximate)");
  r.line(std::string("certificate: ") + (cert.ok() ? "verified" : "FAILED") +
         " (primal feasible " + yes_no(cert.primal_feasible) + ", dual feasible " +
         yes_no(cert.dual_feasible) + ", objectives match " + yes_no(cert.objectives_match) + ")");
  r.line("vertices: " + std::to_string(d->vertices.size()));
  put_exact(r.json(), "local_content", d->local_content);
  r["certificate_verified"] = cert.ok();
  Json vertices = Json::array();
  for (std::size_t i = 0; i < d->vertices.size(); ++i) {
    const auto st = as_deterministic(d->vertices[i]);
    r.line("  weight " + format_scalar(d->weights[i]) + ": " + describe_strategy(*st, b.spaces()));
    Json v = Json::object();
    v["weight"] = format_scalar(d->weights[i]);
    v["strategy"] = strategy_json(*st, b.spaces());
    vertices.push_back(std::move(v));
  }
  r["vertices"] = std::move(vertices);
  r["residual_weight"] = format_scalar(Scalar(1) - d->local_content);
  r["residual_used"] = d->residual_used;
  if (d->residual_used) {
    r.line("residual weight: " + format_scalar(Scalar(1) - d->local_content) + " (" +
           describe_kernel(d->residual) + ")");
    r["residual"] = io::box_to_json(d->residual)["p"];
  } else {
    r.line("residual weight: 0 (fully local)");
  }

  bool passed = cert.ok();
  if (verify) {
    const auto report = verify_decomposition(*d, b);
    Json checks = Json::array();
    for (const auto& ch : report.checks) {
      r.line("verify " + ch.name + ": " + (ch.passed ? "pass" : "FAIL") +
             (ch.passed || ch.detail.empty() ? "" : " (" + ch.detail + ")"));
      Json j = Json::object();
      j["name"] = ch.name;
      j["passed"] = ch.passed;
      j["detail"] = ch.detail;
      checks.push_back(std::move(j));
    }
    r.line(std::string("verification: ") + (report.ok() ? "passed" : "failed"));
    r["verification"] = std::move(checks);
    r["verified"] = report.ok();
    passed = passed && report.ok();
  }
  if (!emit_model.empty()) {
    io::write_json(emit_model, io::model_to_json(decomposition_to_model(*d)));
    r.line("model written: " + emit_model);
    r["model_file"] = emit_model;
  }
  r.emit(c.format, c.out);
  return passed ? ok : property_failed;
}

int cmd_model_verify(Context& c, const std::string& path, const std::string& against) {
  bool extended = false;
  const HiddenVariableModel m = load_model(path, &extended);
  const Behavior b = load_box(against);
  if (!(b.spaces() == m.spaces())) throw Error(ErrorCode::SpaceMismatch, "model and box use different spaces");
  const Behavior recon = reconstruct(m);

  Report r("model verify");
  r["model"] = path;
  r["against"] = against;
  r["extended"] = extended;
  if (extended) r.line("extension: W marginalized out before reconstruction");
  const Spaces& s = b.spaces();
  for (std::size_t a = 0; a < s.settings_a.size(); ++a) {
    for (std::size_t bb = 0; bb < s.settings_b.size(); ++bb) {
      for (std::size_t x = 0; x < s.outcomes_x.size(); ++x) {
        for (std::size_t y = 0; y < s.outcomes_y.size(); ++y) {
          if (recon(a, bb, x, y) == b(a, bb, x, y)) continue;
          const std::string where = cell_label(s, a, bb, x, y);
          r.line("reconstruction: differs at " + where + ": model " + format_scalar(recon(a, bb, x, y)) +
                 " vs box " + format_scalar(b(a, bb, x, y)));
          r["exact"] = false;
          Json w = Json::object();
          w["cell"] = where;
          w["model"] = format_scalar(recon(a, bb, x, y));
          w["box"] = format_scalar(b(a, bb, x, y));
          r["witness"] = std::move(w);
          r.emit(c.format, c.out);
          return property_failed;
        }
      }
    }
  }
  r.line("reconstruction: exact");
  r["exact"] = true;
  r.emit(c.format, c.out);
  return ok;
}

int cmd_model_guess(Context& c, const std::string& path, const std::string& side_arg) {
  const HiddenVariableModel m = load_model(path);
  const Side side = side_arg == "A" ? Side::alice : Side::bob;
  const LabelSet& settings = side == Side::alice ? m.spaces().settings_a : m.spaces().settings_b;
  const std::string name = side == Side::alice ? "a" : "b";

  Report r("model guess");
  r["model"] = path;
  r["side"] = to_string(side);
  Json values = Json::object();
  std::string exact_line, approx_line;
  for (std::size_t i = 0; i < settings.size(); ++i) {
    const Scalar g = guessing_probability(m, side, i);
    if (i) {
      exact_line += ", ";
      approx_line += ", ";
    }
    exact_line += name + "=" + settings[i] + ": " + format_scalar(g);
    approx_line += name + "=" + settings[i] + " ~ " + approx(g);
    Json v = Json::object();
    put_exact(v, "value", g);
    values[settings[i]] = std::move(v);
  }
  r["guessing_probability"] = std::move(values);
  r.line(exact_line);
  r.line("approx: " + approx_line + " (approximate)");
  r.emit(c.format, c.out);
  return ok;
}

int cmd_model_marginalize(Context& c, const std::string& path, const std::string& output) {
  const HiddenVariableModel m = load_model(path);
  const Json doc = io::model_to_json(m);
  if (output.empty()) {
    c.out << io::dump(doc);
    return ok;
  }
  io::write_json(output, doc);
  Report r("model marginalize");
  r["model"] = path;
  r["output"] = output;
  r["pairs"] = m.size();
  r.line("written: " + output + " (" + std::to_string(m.size()) + " hidden pairs)");
  r.emit(c.format, c.out);
  return ok;
}

int cmd_model_first_mover(Context& c, const std::string& path, const std::string& pa, const std::string& pb) {
  const HiddenVariableModel m = load_model(path);
  const JointTable joint = first_mover_joint(m, parse_distribution(pa, m.spaces().settings_a.size()),
                                             parse_distribution(pb, m.spaces().settings_b.size()));
  const ProductResult res = check_product(joint, {"B"}, {"X", "A", "U", "V"});

  Report r("model first-mover");
  r["model"] = path;
  r["independent"] = res.product;
  r["witness"] = nullptr;
  r.line(std::string("B independent of (X,A,U,V): ") + yes_no(res.product));
  if (res.witness) {
    std::string where;
    Json assignment = Json::object();
    for (const auto& [var, label] : res.witness->assignment) {
      if (!where.empty()) where += ",";
      where += var + "=" + label;
      assignment[var] = label;
    }
    r.line("witness: " + where + ": P = " + format_scalar(res.witness->joint) + " vs P(B) P(X,A,U,V) = " +
           format_scalar(res.witness->product()));
    Json w = Json::object();
    w["assignment"] = std::move(assignment);
    w["joint"] = format_scalar(res.witness->joint);
    w["product"] = format_scalar(res.witness->product());
    r["witness"] = std::move(w);
  }
  r.emit(c.format, c.out);
  return res ? ok : property_failed;
}

int cmd_catalog_list(Context& c) {
  Report r("catalog list");
  Json entries = Json::array();
  for (const auto& e : catalog::entries()) {
    std::ostringstream os;
    os << std::left << std::setw(14) << e.key << std::setw(16) << catalog::to_string(e.kind) << e.provenance;
    r.line(os.str());
    Json j = Json::object();
    j["key"] = e.key;
    j["kind"] = catalog::to_string(e.kind);
    j["provenance"] = e.provenance;
    entries.push_back(std::move(j));
  }
  r["entries"] = std::move(entries);
  r.emit(c.format, c.out);
  return ok;
}

int cmd_catalog_show(Context& c, const std::string& key) {
  const auto entry = catalog::find(key);
  if (!entry) throw Error(ErrorCode::ParseError, "unknown catalog key '" + key + "'");
  struct Visitor {
    Context& c;
    void operator()(const Scalar& s) const {
      if (c.format == Format::json) {
        Json j = Json::object();
        put_exact(j, "value", s);
        c.out << io::dump(j);
      } else {
        c.out << format_scalar(s) << '\n';
      }
    }
    void operator()(const Behavior& b) const { c.out << io::dump(io::box_to_json(b)); }
    void operator()(const HiddenVariableModel& m) const { c.out << io::dump(io::model_to_json(m)); }
    void operator()(const ExtendedModel& m) const { c.out << io::dump(io::model_to_json(m)); }
    void operator()(const BellExpression& e) const { c.out << io::dump(io::expression_to_json(e)); }
  };
  std::visit(Visitor{c}, entry->value);
  return ok;
}

// Demos.

class Steps {
 public:
  explicit Steps(Report& r) : r_(r) {}

  void step(const std::string& name, bool passed, const std::string& text) {
    r_.line(text);
    if (!passed) {
      r_.line("  assertion failed: " + name);
      all_ = false;
    }
    Json j = Json::object();
    j["name"] = name;
    j["passed"] = passed;
    j["detail"] = text;
    steps_.push_back(std::move(j));
  }

  int finish(Format format, std::ostream& out) {
    r_["steps"] = steps_;
    r_["passed"] = all_;
    r_.emit(format, out);
    return all_ ? ok : property_failed;
  }

 private:
  Report& r_;
  Json steps_ = Json::array();
  bool all_ = true;
};

int demo_appendix_a(Context& c) {
  Report r("demo");
  r["demo"] = "appendix-a";
  Steps s(r);
  r.line("appendix-a: local hidden variables (U,V) with a non-trivial local part");

  const Scalar alpha = catalog::alpha();
  s.step("alpha", alpha == Scalar(Rational(1, 4), Rational(-1, 8)),
         "alpha = 1/2 sin^2(pi/8) = " + format_scalar(alpha) + " (~" + approx(alpha) + ")");

  const HiddenVariableModel m = catalog::appendix_a_model();
  r.line("model: " + std::to_string(m.size()) + " hidden pairs");
  for (std::size_t i = 0; i < m.size(); ++i) {
    r.line("  " + m.pairs[i].label() + " weight " + format_scalar(m.weights[i]) + ": " + describe_kernel(m.kernels[i]));
  }

  const Behavior table1 = catalog::table1_box();
  s.step("reconstruction", reconstruct(m) == table1,
         std::string("reconstruction equals table1: ") + yes_no(reconstruct(m) == table1));

  const LocalityResult loc = check_locality(m);
  s.step("locality", loc.local, std::string("local: ") + yes_no(loc.local) + " (every kernel is no-signalling)");

  const TrivialityResult triv = check_triviality(m);
  s.step("non-triviality", !triv.trivial,
         std::string("trivial: ") + yes_no(triv.trivial) +
             (triv.witness ? " (witness: " + describe_triviality(*triv.witness, m) + ")" : ""));

  const Scalar expected_guess = Scalar::fraction(1, 2) + Scalar(2) * alpha;
  for (Side side : {Side::alice, Side::bob}) {
    const LabelSet& settings = side == Side::alice ? m.spaces().settings_a : m.spaces().settings_b;
    std::string text = "guessing probability " + to_string(side) + ": ";
    bool all_equal = true;
    for (std::size_t i = 0; i < settings.size(); ++i) {
      const Scalar g = guessing_probability(m, side, i);
      all_equal = all_equal && g == expected_guess;
      text += (i ? ", " : "") + std::string(side == Side::alice ? "a=" : "b=") + settings[i] + ": " + format_scalar(g);
    }
    text += std::string("; equals 1/2+2*alpha: ") + yes_no(all_equal);
    s.step("guessing probability " + to_string(side), all_equal, text);
  }

  const BellExpression e = chsh();
  const Scalar value = evaluate(e, table1);
  const Scalar lb = local_bound(e).value;
  const Scalar ns = ns_bound(e);
  const bool sandwich = lb < value && value < ns;
  s.step("chsh", sandwich && value == Scalar(0, 2),
         "CHSH: value " + format_scalar(value) + ", local bound " + format_scalar(lb) + ", ns bound " +
             format_scalar(ns) + "; local < value < ns: " + yes_no(sandwich));

  const auto fm = check_product(first_mover_joint(m, uniform_distribution(2), uniform_distribution(2)), {"B"},
                                {"X", "A", "U", "V"});
  s.step("first mover", fm.product, std::string("B independent of (X,A,U,V): ") + yes_no(fm.product));

  const Scalar weight = nontrivial_weight(m);
  const LocalDecomposition d = max_local_content(table1);
  const bool cert = verify_certificate(d.lp, d.solution).ok();
  s.step("lp", cert && d.local_content == Scalar(8) * alpha && weight < d.local_content,
         "LP maximal local content: " + format_scalar(d.local_content) + " = 8*alpha (certificate " +
             (cert ? "verified" : "FAILED") + "), above the model's nontrivial weight " + format_scalar(weight));

  put_exact(r.json(), "nontrivial_weight", weight);
  put_exact(r.json(), "max_local_content", d.local_content);
  r.line("nontrivial_weight: " + format_scalar(weight) + "; max_local_content: " + format_scalar(d.local_content));
  return s.finish(c.format, c.out);
}

int demo_appendix_b(Context& c, std::uint64_t seed) {
  Report r("demo");
  r["demo"] = "appendix-b";
  Steps s(r);
  r.line("appendix-b: signalling correlations X = B, Y = A");

  const Behavior box = catalog::signalling_box();
  r.line("box: settings and outcomes {0,1}; P(x,y|a,b) = 1 iff x = b and y = a");
  s.step("valid", validate_behavior(box).valid(), std::string("valid: ") + yes_no(validate_behavior(box).valid()));

  const NsResult ns = is_no_signalling(box);
  s.step("signalling", !ns.no_signalling && ns.witness.has_value(),
         std::string("no-signalling: ") + yes_no(ns.no_signalling) +
             (ns.witness ? "\nwitness: " + describe(*ns.witness, box.spaces()) : ""));
  if (ns.witness) r["witness"] = ns_witness_json(*ns.witness, box.spaces());

  bool refused = false;
  std::string message;
  try {
    max_local_content(box);
  } catch (const Error& e) {
    refused = e.code() == ErrorCode::SignallingInput;
    message = e.message();
  }
  s.step("decompose refuses", refused, "decompose: " + (refused ? message : std::string("accepted the box")));

  sampling::Rng rng(seed);
  const std::size_t trials = 100;
  std::size_t closed = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const HiddenVariableModel m = sampling::random_local_model(rng, box.spaces(), 1 + i % 4);
    if (check_locality(m) && is_no_signalling(reconstruct(m))) ++closed;
  }
  r["random_models"] = trials;
  r["random_models_no_signalling"] = closed;
  r["seed"] = seed;
  s.step("closure", closed == trials,
         "random local models: " + std::to_string(closed) + " of " + std::to_string(trials) +
             " reconstruct to no-signalling boxes (seed " + std::to_string(seed) + ")");

  r.line("conclusion: mixtures of no-signalling kernels are no-signalling, so no local model possible for "
         "signalling correlations");
  r["conclusion"] = "no local model possible for signalling correlations";
  return s.finish(c.format, c.out);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hvlab: exact analysis of bipartite boxes and hidden-variable models over Q(sqrt2)", "hvlab"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));

  std::string path, against, box_path, expression, emit_model, output, side = "A", pa, pb, key, demo_name;
  bool verify = false;
  std::uint64_t seed = 1;

  auto* check = app.add_subcommand("check", "validate a box or model file");
  check->add_option("path", path, "box or model file")->required();
  check->add_option("--against", against, "compare kernel marginals with this box");

  auto* bell = app.add_subcommand("bell", "evaluate a Bell functional with its local and no-signalling bounds");
  bell->add_option("expression", expression, "'chsh' or a coefficient file")->required();
  bell->add_option("box", box_path, "box file")->required();

  auto* decompose = app.add_subcommand("decompose", "maximal local content by exact LP");
  decompose->add_option("box", box_path, "box file")->required();
  decompose->add_option("--emit-model", emit_model, "write the decomposition as a model file");
  decompose->add_flag("--verify", verify, "re-check the decomposition");

  auto* model = app.add_subcommand("model", "model operations");
  model->require_subcommand(1);
  auto* mverify = model->add_subcommand("verify", "check exact reconstruction");
  mverify->add_option("model", path)->required();
  mverify->add_option("--against", against, "box file")->required();
  auto* mguess = model->add_subcommand("guess", "per-setting guessing probability from (U,V)");
  mguess->add_option("model", path)->required();
  mguess->add_option("--side", side, "A or B")->check(CLI::IsMember({"A", "B"}));
  auto* mmarg = model->add_subcommand("marginalize", "fold a W extension into plain kernels");
  mmarg->add_option("model", path)->required();
  mmarg->add_option("-o,--output", output, "output file (default stdout)");
  auto* mfirst = model->add_subcommand("first-mover", "Bob's setting independence check");
  mfirst->add_option("model", path)->required();
  mfirst->add_option("--pa", pa, "distribution over Alice's settings, comma separated");
  mfirst->add_option("--pb", pb, "distribution over Bob's settings, comma separated");

  auto* cat = app.add_subcommand("catalog", "built-in boxes, models and constants");
  cat->require_subcommand(1);
  auto* clist = cat->add_subcommand("list", "list entries");
  auto* cshow = cat->add_subcommand("show", "print an entry in its file format");
  cshow->add_option("key", key)->required();

  auto* demo = app.add_subcommand("demo", "narrated walkthroughs: appendix-a, appendix-b");
  demo->add_option("name", demo_name)->required();
  demo->add_option("--seed", seed, "seed for the random models of appendix-b");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : input_error;
  }

  Context c{format == "json" ? Format::json : Format::text, out, err};
  if (*check) return cmd_check(c, path, against);
  if (*bell) return cmd_bell(c, expression, box_path);
  if (*decompose) return cmd_decompose(c, box_path, emit_model, verify);
  if (*mverify) return cmd_model_verify(c, path, against);
  if (*mguess) return cmd_model_guess(c, path, side);
  if (*mmarg) return cmd_model_marginalize(c, path, output);
  if (*mfirst) return cmd_model_first_mover(c, path, pa, pb);
  if (*clist) return cmd_catalog_list(c);
  if (*cshow) return cmd_catalog_show(c, key);
  if (*demo) {
    if (demo_name == "appendix-a") return demo_appendix_a(c);
    if (demo_name == "appendix-b") return demo_appendix_b(c, seed);
    err << "error: unknown demo '" << demo_name << "' (available: appendix-a, appendix-b)\n";
    return input_error;
  }
  err << "error: no command\n";
  return input_error;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    const bool property = e.code() == ErrorCode::NotLocal || e.code() == ErrorCode::SignallingInput;
    return property ? property_failed : input_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  } catch (...) {
    err << "error: unexpected failure\n";
    return input_error;
  }
}

}  // namespace hvlab::cli
