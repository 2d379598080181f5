#include "gr/proof.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace gr {

static const std::pair<RuleId, const char*> kRuleNames[] = {
    {RuleId::Init, "Init"},       {RuleId::InitBot, "InitBot"},
    {RuleId::AndL1, "AndL1"},     {RuleId::AndL2, "AndL2"},
    {RuleId::AndR, "AndR"},       {RuleId::NegL, "NegL"},
    {RuleId::NegR, "NegR"},       {RuleId::ContrL, "ContrL"},
    {RuleId::ContrR, "ContrR"},   {RuleId::WeakL, "WeakL"},
    {RuleId::WeakR, "WeakR"},     {RuleId::Cut, "Cut"},
    {RuleId::EW, "EW"},           {RuleId::Split, "Split"},
    {RuleId::Merge, "Merge"},     {RuleId::BotRule, "BotRule"},
    {RuleId::K, "K"},             {RuleId::Four, "Four"},
    {RuleId::BoxRight, "BoxRight"}, {RuleId::KBlack, "KBlack"},
    {RuleId::FourBlack, "FourBlack"}, {RuleId::BlackR1, "BlackR1"},
    {RuleId::BlackL, "BlackL"},   {RuleId::BlackR2, "BlackR2"},
    {RuleId::ToDouble, "ToDouble"}, {RuleId::ToArrow, "ToArrow"},
};

const char* rule_name(RuleId r) {
  for (auto& [id, n] : kRuleNames)
    if (id == r) return n;
  return "?";
}

std::optional<RuleId> rule_from_name(const std::string& s) {
  for (auto& [id, n] : kRuleNames)
    if (s == n) return id;
  return std::nullopt;
}

bool is_modal_black(RuleId r) {
  return r == RuleId::KBlack || r == RuleId::FourBlack || r == RuleId::BlackR1 ||
         r == RuleId::BlackL || r == RuleId::BlackR2;
}

ProofPtr mk_node(Hyper concl, RuleApp app, std::vector<ProofPtr> prem) {
  auto n = std::make_shared<ProofNode>();
  n->conclusion = std::move(concl);
  n->app = std::move(app);
  n->premises = std::move(prem);
  return n;
}

size_t proof_size(const ProofPtr& p) {
  size_t n = 1;
  for (auto& q : p->premises) n += proof_size(q);
  return n;
}

size_t count_cuts(const ProofPtr& p) {
  size_t n = p->app.rule == RuleId::Cut ? 1 : 0;
  for (auto& q : p->premises) n += count_cuts(q);
  return n;
}

bool cut_free(const ProofPtr& p) { return count_cuts(p) == 0; }

void rules_used(const ProofPtr& p, std::map<RuleId, size_t>& out) {
  out[p->app.rule]++;
  for (auto& q : p->premises) rules_used(q, out);
}

const ProofNode* node_at(const ProofPtr& root, const NodePath& path) {
  const ProofNode* n = root.get();
  for (int i : path) {
    if (i < 0 || static_cast<size_t>(i) >= n->premises.size()) return nullptr;
    n = n->premises[i].get();
  }
  return n;
}

static bool path_search(const ProofNode* cur, const ProofNode* target, NodePath& acc) {
  if (cur == target) return true;
  for (size_t i = 0; i < cur->premises.size(); i++) {
    acc.push_back(static_cast<int>(i));
    if (path_search(cur->premises[i].get(), target, acc)) return true;
    acc.pop_back();
  }
  return false;
}

std::optional<NodePath> path_of(const ProofPtr& root, const ProofNode* n) {
  NodePath acc;
  if (path_search(root.get(), n, acc)) return acc;
  return std::nullopt;
}

// ---- JSON -------------------------------------------------------------------

using nlohmann::json;

static json app_to_json(const RuleApp& a) {
  json j = json::object();
  auto put = [&](const char* k, int v) {
    if (v >= 0) j[k] = v;
  };
  put("comp", a.comp);
  put("comp2", a.comp2);
  put("pos", a.pos);
  put("pos2", a.pos2);
  put("lcomp", a.lcomp);
  put("lpos", a.lpos);
  put("rcomp", a.rcomp);
  put("rpos", a.rpos);
  if (a.cut_formula) j["cut_formula"] = a.cut_formula->str();
  return j;
}

static json node_to_json(const ProofPtr& p) {
  json j;
  j["rule"] = rule_name(p->app.rule);
  j["conclusion"] = p->conclusion.str();
  json app = app_to_json(p->app);
  if (!app.empty()) j["app"] = app;
  json prem = json::array();
  for (auto& q : p->premises) prem.push_back(node_to_json(q));
  if (!prem.empty()) j["premises"] = prem;
  return j;
}

std::string proof_to_json(const ProofPtr& p) { return node_to_json(p).dump(1); }

static ProofPtr node_from_json(const json& j) {
  if (!j.is_object()) throw std::runtime_error("proof node: expected object");
  auto rule = rule_from_name(j.at("rule").get<std::string>());
  if (!rule) throw std::runtime_error("unknown rule name: " + j.at("rule").get<std::string>());
  RuleApp app;
  app.rule = *rule;
  if (j.contains("app")) {
    const json& a = j.at("app");
    auto get = [&](const char* k, int& v) {
      if (a.contains(k)) v = a.at(k).get<int>();
    };
    get("comp", app.comp);
    get("comp2", app.comp2);
    get("pos", app.pos);
    get("pos2", app.pos2);
    get("lcomp", app.lcomp);
    get("lpos", app.lpos);
    get("rcomp", app.rcomp);
    get("rpos", app.rpos);
    if (a.contains("cut_formula"))
      app.cut_formula = parse_formula(a.at("cut_formula").get<std::string>());
  }
  std::vector<ProofPtr> prem;
  if (j.contains("premises"))
    for (auto& q : j.at("premises")) prem.push_back(node_from_json(q));
  return mk_node(parse_hyper(j.at("conclusion").get<std::string>()), std::move(app),
                 std::move(prem));
}

ProofPtr proof_from_json(const std::string& text) {
  return node_from_json(json::parse(text));
}

ProofPtr load_proof_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open proof file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return proof_from_json(ss.str());
}

void save_proof_file(const ProofPtr& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write proof file: " + path);
  out << proof_to_json(p) << "\n";
}

}  // namespace gr
