// Copyright 2026 the optiloop authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "optiloop/milp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace optiloop {

const char* to_string(RowTag tag) {
  switch (tag) {
    case RowTag::FlowIn: return "FLOW_IN";
    case RowTag::FlowOut: return "FLOW_OUT";
    case RowTag::EnableLink: return "ENABLE_LINK";
    case RowTag::CapacityL: return "CAPACITY_L";
    case RowTag::EnableCore: return "ENABLE_CORE";
    case RowTag::HonorDelta: return "HONOR_DELTA";
    case RowTag::CapacityC: return "CAPACITY_C";
    case RowTag::Delay: return "DELAY";
    case RowTag::Match: return "MATCH";
  }
  return "?";
}

VariablePolicy VariablePolicy::all_binary() { return {}; }

VariablePolicy VariablePolicy::all_relaxed() {
  VariablePolicy p;
  p.fallback = Setting::relax();
  return p;
}

VariablePolicy VariablePolicy::all_fixed(double value) {
  VariablePolicy p;
  p.fallback = Setting::fix(value);
  return p;
}

namespace {

struct RowBuilder {
  ProblemInstance& inst;
  explicit RowBuilder(ProblemInstance& i) : inst(i) {
    if (inst.row_start.empty()) inst.row_start.push_back(0);
  }
  void open(RowInfo info) {
    inst.rows.push_back(info);
    inst.row_start.push_back(inst.row_start.back());
  }
  void add(int col, double coef) {
    if (coef == 0.0) return;
    inst.entry_col.push_back(col);
    inst.entry_coef.push_back(coef);
    inst.row_start.back() += 1;
  }
};

VariablePolicy::Setting policy_for_x(const VariablePolicy& p, const LinkKey& l) {
  auto it = p.x.find({l.src, l.dst});
  return it == p.x.end() ? p.fallback : it->second;
}
VariablePolicy::Setting policy_for_y(const VariablePolicy& p, const Id& c) {
  auto it = p.y.find(c);
  return it == p.y.end() ? p.fallback : it->second;
}
VariablePolicy::Setting policy_for_delta(const VariablePolicy& p, const Id& c,
                                         const Id& v) {
  auto it = p.delta.find({c, v});
  return it == p.delta.end() ? p.fallback : it->second;
}

void apply_binary_policy(VarInfo& col, const VariablePolicy::Setting& s,
                         const std::string& name) {
  col.binary_kind = true;
  switch (s.kind) {
    case VariablePolicy::Setting::Kind::Binary:
      col.lo = 0.0;
      col.hi = 1.0;
      col.integral = true;
      break;
    case VariablePolicy::Setting::Kind::Relax:
      col.lo = 0.0;
      col.hi = 1.0;
      col.integral = false;
      break;
    case VariablePolicy::Setting::Kind::Fix:
      if (s.value != 0.0 && s.value != 1.0)
        throw InconsistentPolicy("fix value for " + name + " must be 0 or 1");
      col.lo = col.hi = s.value;
      col.integral = false;
      break;
  }
}

}  // namespace

ProblemInstance build_instance(const LogicalGraph& lg, const PhysicalGraph& pg,
                               const EnergyModel& em, const VariablePolicy& policy) {
  lg.validate();
  pg.validate();
  em.validate();

  ProblemInstance inst;
  inst.endpoints.assign(pg.endpoints.begin(), pg.endpoints.end());
  inst.nodes.assign(pg.nodes.begin(), pg.nodes.end());
  inst.vnfs.assign(lg.vnfs.begin(), lg.vnfs.end());
  inst.links.reserve(pg.links.size());
  for (const Link& l : pg.links) inst.links.push_back({l.src, l.dst});
  std::sort(inst.links.begin(), inst.links.end());
  inst.comms = commodities(lg);

  std::map<Id, int> eidx, nidx, vidx;
  for (size_t i = 0; i < inst.endpoints.size(); ++i) eidx[inst.endpoints[i]] = int(i);
  for (size_t i = 0; i < inst.nodes.size(); ++i) nidx[inst.nodes[i]] = int(i);
  for (size_t i = 0; i < inst.vnfs.size(); ++i) vidx[inst.vnfs[i]] = int(i);
  std::map<LinkKey, int> lidx;
  for (size_t i = 0; i < inst.links.size(); ++i) lidx[inst.links[i]] = int(i);
  std::map<FlowKey, int> kidx;
  for (size_t i = 0; i < inst.comms.size(); ++i) kidx[inst.comms[i]] = int(i);

  // policy sanity
  for (const auto& [key, s] : policy.x) {
    (void)s;
    if (!lidx.count({key.first, key.second}))
      throw InconsistentPolicy("policy references unknown link " + key.first + "->" +
                               key.second);
  }
  for (const auto& [c, s] : policy.y) {
    (void)s;
    if (!nidx.count(c)) throw InconsistentPolicy("policy references unknown node " + c);
  }
  for (const auto& [key, s] : policy.delta) {
    (void)s;
    if (!nidx.count(key.first) || !vidx.count(key.second))
      throw InconsistentPolicy("policy references unknown placement " + key.first +
                               "," + key.second);
  }

  std::map<LinkKey, double> link_bw;
  for (const Link& l : pg.links) link_bw[{l.src, l.dst}] = l.bandwidth_bps;
  std::map<LinkKey, double> link_delay;
  for (const Link& l : pg.links) link_delay[{l.src, l.dst}] = l.delay_s;

  // Which commodities may ride each link: node-to-node links carry
  // everything, a link out of an endpoint carries only that endpoint's
  // injections, links into endpoints carry nothing.
  auto admissible = [&](const LinkKey& l, const FlowKey& k) {
    if (pg.endpoints.count(l.dst)) return false;
    if (pg.endpoints.count(l.src)) return l.src == k.endpoint && k.is_injection();
    return true;
  };

  const int L = static_cast<int>(inst.links.size());
  const int C = static_cast<int>(inst.nodes.size());
  const int V = static_cast<int>(inst.vnfs.size());
  const int K = static_cast<int>(inst.comms.size());

  // columns: x, y, delta, tau, transit, processed
  for (int li = 0; li < L; ++li) {
    VarInfo col{VarKind::X};
    col.link = li;
    apply_binary_policy(col, policy_for_x(policy, inst.links[li]),
                        "x(" + inst.links[li].src + "->" + inst.links[li].dst + ")");
    inst.x_col[li] = inst.num_cols();
    inst.cols.push_back(col);
  }
  for (int ci = 0; ci < C; ++ci) {
    VarInfo col{VarKind::Y};
    col.node = ci;
    col.obj = em.idle(inst.nodes[ci]);
    apply_binary_policy(col, policy_for_y(policy, inst.nodes[ci]),
                        "y(" + inst.nodes[ci] + ")");
    inst.y_col[ci] = inst.num_cols();
    inst.cols.push_back(col);
  }
  for (int ci = 0; ci < C; ++ci)
    for (int vi = 0; vi < V; ++vi) {
      VarInfo col{VarKind::Delta};
      col.node = ci;
      col.vnf = vi;
      col.obj = em.overhead(inst.nodes[ci], inst.vnfs[vi]);
      apply_binary_policy(col,
                          policy_for_delta(policy, inst.nodes[ci], inst.vnfs[vi]),
                          "delta(" + inst.nodes[ci] + "," + inst.vnfs[vi] + ")");
      inst.delta_col[{ci, vi}] = inst.num_cols();
      inst.cols.push_back(col);
    }
  // flow variables carry no tightened bounds: bandwidth and capability
  // limits live only in their tagged rows, so infeasibility analysis can
  // attribute conflicts to the right constraint family
  for (int li = 0; li < L; ++li) {
    const LinkKey& l = inst.links[li];
    const bool from_node = pg.nodes.count(l.src) > 0;
    for (int ki = 0; ki < K; ++ki) {
      if (!admissible(l, inst.comms[ki])) continue;
      VarInfo col{VarKind::Tau};
      col.link = li;
      col.comm = ki;
      col.lo = 0.0;
      col.hi = lp::kInf;
      col.obj = em.link_slope(l.src, l.dst) +
                (from_node ? em.switch_slope(l.src) : 0.0);
      inst.tau_col[{li, ki}] = inst.num_cols();
      inst.cols.push_back(col);
    }
  }
  for (int ci = 0; ci < C; ++ci)
    for (int ki = 0; ki < K; ++ki) {
      VarInfo col{VarKind::Transit};
      col.node = ci;
      col.comm = ki;
      col.lo = 0.0;
      col.hi = lp::kInf;
      inst.transit_col[{ci, ki}] = inst.num_cols();
      inst.cols.push_back(col);
    }
  for (int ci = 0; ci < C; ++ci) {
    for (int ki = 0; ki < K; ++ki) {
      const FlowKey& comm = inst.comms[ki];
      const double r = lg.cpu(comm.to_vnf);
      VarInfo col{VarKind::Proc};
      col.node = ci;
      col.comm = ki;
      col.lo = 0.0;
      col.hi = lp::kInf;
      col.obj = em.proc_slope(inst.nodes[ci]) * r;
      inst.proc_col[{ci, ki}] = inst.num_cols();
      inst.cols.push_back(col);
    }
  }

  // incoming/outgoing admissible tau per node, for the conservation rows
  std::vector<std::vector<int>> links_in(C), links_out(C);
  for (int li = 0; li < L; ++li) {
    const LinkKey& l = inst.links[li];
    if (auto it = nidx.find(l.dst); it != nidx.end()) links_in[it->second].push_back(li);
    if (auto it = nidx.find(l.src); it != nidx.end()) links_out[it->second].push_back(li);
  }

  RowBuilder rb(inst);

  // Traffic of a commodity available at a node, whether it arrived over a
  // link or was produced by processing at the node itself, is either
  // processed there or transits. Keeping the chi-weighted generation on
  // the inflow side lets consecutive VNFs of a chain share a node without
  // a physical round trip while transit stays nonnegative.
  for (int ci = 0; ci < C; ++ci)
    for (int ki = 0; ki < K; ++ki) {
      const FlowKey& comm = inst.comms[ki];
      RowInfo info{RowTag::FlowIn};
      info.node = ci;
      info.comm = ki;
      info.sense = lp::Sense::EQ;
      info.rhs = 0.0;
      rb.open(info);
      for (int li : links_in[ci])
        if (auto it = inst.tau_col.find({li, ki}); it != inst.tau_col.end())
          rb.add(it->second, 1.0);
      if (!comm.is_injection()) {
        // producers: commodities of the same endpoint whose next hop is
        // this commodity's origin VNF; injections transform with the
        // endpoint as chi origin
        for (int kj = 0; kj < K; ++kj) {
          const FlowKey& in = inst.comms[kj];
          if (in.endpoint != comm.endpoint || in.to_vnf != comm.from_vnf) continue;
          const Id& origin = in.is_injection() ? in.endpoint : in.from_vnf;
          const double ratio = lg.chi_at(origin, comm.from_vnf, comm.to_vnf);
          if (ratio > 0) rb.add(inst.proc_col.at({ci, kj}), ratio);
        }
      }
      rb.add(inst.transit_col.at({ci, ki}), -1.0);
      rb.add(inst.proc_col.at({ci, ki}), -1.0);
    }

  // whatever transits a node leaves it over some link
  for (int ci = 0; ci < C; ++ci)
    for (int ki = 0; ki < K; ++ki) {
      RowInfo info{RowTag::FlowOut};
      info.node = ci;
      info.comm = ki;
      info.sense = lp::Sense::EQ;
      info.rhs = 0.0;
      rb.open(info);
      for (int li : links_out[ci])
        if (auto it = inst.tau_col.find({li, ki}); it != inst.tau_col.end())
          rb.add(it->second, 1.0);
      rb.add(inst.transit_col.at({ci, ki}), -1.0);
    }

  // a link needs both of its node ends powered
  for (int li = 0; li < L; ++li) {
    const LinkKey& l = inst.links[li];
    for (const Id& end : {l.src, l.dst}) {
      auto it = nidx.find(end);
      if (it == nidx.end()) continue;
      RowInfo info{RowTag::EnableLink};
      info.link = li;
      info.node = it->second;
      info.sense = lp::Sense::LE;
      info.rhs = 0.0;
      rb.open(info);
      rb.add(inst.x_col.at(li), 1.0);
      rb.add(inst.y_col.at(it->second), -1.0);
    }
  }

  // bandwidth, gated by link activation
  for (int li = 0; li < L; ++li) {
    bool any = false;
    for (int ki = 0; ki < K && !any; ++ki) any = inst.tau_col.count({li, ki}) > 0;
    if (!any) continue;
    RowInfo info{RowTag::CapacityL};
    info.link = li;
    info.sense = lp::Sense::LE;
    info.rhs = 0.0;
    rb.open(info);
    for (int ki = 0; ki < K; ++ki)
      if (auto it = inst.tau_col.find({li, ki}); it != inst.tau_col.end())
        rb.add(it->second, 1.0);
    rb.add(inst.x_col.at(li), -link_bw[inst.links[li]]);
  }

  // placements need their node powered
  for (int ci = 0; ci < C; ++ci)
    for (int vi = 0; vi < V; ++vi) {
      RowInfo info{RowTag::EnableCore};
      info.node = ci;
      info.vnf = vi;
      info.sense = lp::Sense::LE;
      info.rhs = 0.0;
      rb.open(info);
      rb.add(inst.delta_col.at({ci, vi}), 1.0);
      rb.add(inst.y_col.at(ci), -1.0);
    }

  // processing requires the matching placement
  for (int ci = 0; ci < C; ++ci) {
    const double k = pg.capacity(inst.nodes[ci]);
    for (int ki = 0; ki < K; ++ki) {
      const FlowKey& comm = inst.comms[ki];
      RowInfo info{RowTag::HonorDelta};
      info.node = ci;
      info.comm = ki;
      info.sense = lp::Sense::LE;
      info.rhs = 0.0;
      rb.open(info);
      rb.add(inst.proc_col.at({ci, ki}), 1.0);
      rb.add(inst.delta_col.at({ci, vidx.at(comm.to_vnf)}), -k);
    }
  }

  // node capability covers processing plus software switching of outgoing
  // traffic
  for (int ci = 0; ci < C; ++ci) {
    const Id& c = inst.nodes[ci];
    RowInfo info{RowTag::CapacityC};
    info.node = ci;
    info.sense = lp::Sense::LE;
    info.rhs = pg.capacity(c);
    rb.open(info);
    for (int ki = 0; ki < K; ++ki) {
      const double r = lg.cpu(inst.comms[ki].to_vnf);
      if (r > 0) rb.add(inst.proc_col.at({ci, ki}), r);
    }
    const double rho = pg.switch_cpu(c);
    if (rho > 0)
      for (int li : links_out[ci])
        for (int ki = 0; ki < K; ++ki)
          if (auto it = inst.tau_col.find({li, ki}); it != inst.tau_col.end())
            rb.add(it->second, rho);
  }

  // mean delay per unit of injected traffic, only for bounded endpoints
  for (int ei = 0; ei < static_cast<int>(inst.endpoints.size()); ++ei) {
    const Id& e = inst.endpoints[ei];
    auto bound = pg.max_delay_s.find(e);
    if (bound == pg.max_delay_s.end()) continue;
    double injected_total = 0.0;
    for (const Id& v : lg.vnfs) injected_total += lg.injected(e, v);
    if (injected_total <= 0) continue;
    RowInfo info{RowTag::Delay};
    info.endpoint = ei;
    info.sense = lp::Sense::LE;
    info.rhs = bound->second;
    rb.open(info);
    for (int li = 0; li < L; ++li) {
      const double d = link_delay[inst.links[li]];
      if (d <= 0) continue;
      for (int ki = 0; ki < K; ++ki) {
        if (inst.comms[ki].endpoint != e) continue;
        if (auto it = inst.tau_col.find({li, ki}); it != inst.tau_col.end())
          rb.add(it->second, d / injected_total);
      }
    }
    for (int ci = 0; ci < C; ++ci)
      for (int ki = 0; ki < K; ++ki) {
        if (inst.comms[ki].endpoint != e) continue;
        const double d = lg.proc_delay(inst.comms[ki].to_vnf);
        if (d > 0) rb.add(inst.proc_col.at({ci, ki}), d / injected_total);
      }
  }

  // injected traffic must enter the physical graph where it originates
  for (const auto& [key, rate] : lg.injected_bps) {
    if (rate <= 0) continue;
    const auto& [e, v] = key;
    const int ki = kidx.at(FlowKey{e, v, v});
    RowInfo info{RowTag::Match};
    info.endpoint = eidx.at(e);
    info.vnf = vidx.at(v);
    info.sense = lp::Sense::EQ;
    info.rhs = rate;
    rb.open(info);
    for (int li = 0; li < L; ++li) {
      if (inst.links[li].src != e) continue;
      if (auto it = inst.tau_col.find({li, ki}); it != inst.tau_col.end())
        rb.add(it->second, 1.0);
    }
  }

  return inst;
}

void apply_policy(ProblemInstance& inst, const VariablePolicy& policy) {
  for (const auto& [key, s] : policy.x) {
    (void)s;
    if (!std::binary_search(inst.links.begin(), inst.links.end(),
                            LinkKey{key.first, key.second}))
      throw InconsistentPolicy("policy references unknown link " + key.first +
                               "->" + key.second);
  }
  for (const auto& [li, col] : inst.x_col) {
    VarInfo& c = inst.cols[col];
    apply_binary_policy(c, policy_for_x(policy, inst.links[li]),
                        inst.col_name(col));
  }
  for (const auto& [ni, col] : inst.y_col) {
    VarInfo& c = inst.cols[col];
    apply_binary_policy(c, policy_for_y(policy, inst.nodes[ni]),
                        inst.col_name(col));
  }
  for (const auto& [key, col] : inst.delta_col) {
    VarInfo& c = inst.cols[col];
    apply_binary_policy(
        c, policy_for_delta(policy, inst.nodes[key.first], inst.vnfs[key.second]),
        inst.col_name(col));
  }
}

std::vector<std::string> variable_pruning(const LogicalGraph& lg,
                                          const PhysicalGraph& pg) {
  std::set<FlowKey> kept;
  for (const FlowKey& k : commodities(lg)) kept.insert(k);

  std::vector<std::string> pruned;
  auto note = [&](const std::string& name) { pruned.push_back(name); };
  std::vector<LinkKey> links;
  for (const Link& l : pg.links) links.push_back({l.src, l.dst});
  std::sort(links.begin(), links.end());

  for (const Id& e : lg.endpoints)
    for (const Id& v1 : lg.vnfs)
      for (const Id& v2 : lg.vnfs) {
        FlowKey k{e, v1, v2};
        if (kept.count(k)) continue;
        const std::string suffix =
            "(" + e + "," + v1 + "->" + v2 + ")";
        for (const LinkKey& l : links)
          note("tau[" + l.src + "->" + l.dst + "]" + suffix);
        for (const Id& c : pg.nodes) {
          note("t[" + c + "]" + suffix);
          note("p[" + c + "]" + suffix);
        }
      }
  return pruned;
}

int ProblemInstance::num_integral() const {
  int n = 0;
  for (const VarInfo& c : cols) n += c.integral ? 1 : 0;
  return n;
}

std::string ProblemInstance::col_name(int j) const {
  const VarInfo& c = cols[j];
  std::ostringstream os;
  auto comm_str = [&](int ki) {
    const FlowKey& k = comms[ki];
    return "(" + k.endpoint + "," + k.from_vnf + "->" + k.to_vnf + ")";
  };
  switch (c.kind) {
    case VarKind::X:
      os << "x[" << links[c.link].src << "->" << links[c.link].dst << "]";
      break;
    case VarKind::Y:
      os << "y[" << nodes[c.node] << "]";
      break;
    case VarKind::Delta:
      os << "delta[" << nodes[c.node] << "," << vnfs[c.vnf] << "]";
      break;
    case VarKind::Tau:
      os << "tau[" << links[c.link].src << "->" << links[c.link].dst << "]"
         << comm_str(c.comm);
      break;
    case VarKind::Transit:
      os << "t[" << nodes[c.node] << "]" << comm_str(c.comm);
      break;
    case VarKind::Proc:
      os << "p[" << nodes[c.node] << "]" << comm_str(c.comm);
      break;
  }
  return os.str();
}

std::string ProblemInstance::row_name(int r) const {
  const RowInfo& row = rows[r];
  std::ostringstream os;
  os << to_string(row.tag) << "[";
  bool first = true;
  auto sep = [&] {
    if (!first) os << "|";
    first = false;
  };
  if (row.link >= 0) {
    sep();
    os << links[row.link].src << "->" << links[row.link].dst;
  }
  if (row.node >= 0) {
    sep();
    os << nodes[row.node];
  }
  if (row.endpoint >= 0) {
    sep();
    os << endpoints[row.endpoint];
  }
  if (row.vnf >= 0) {
    sep();
    os << vnfs[row.vnf];
  }
  if (row.comm >= 0) {
    sep();
    const FlowKey& k = comms[row.comm];
    os << k.endpoint << "," << k.from_vnf << "->" << k.to_vnf;
  }
  os << "]";
  return os.str();
}

lp::Lp ProblemInstance::to_lp() const {
  std::vector<char> keep(rows.size(), 1);
  return to_lp_rows(keep);
}

lp::Lp ProblemInstance::to_lp_rows(const std::vector<char>& keep_row) const {
  lp::Lp p;
  std::vector<int> row_map(rows.size(), -1);
  for (size_t r = 0; r < rows.size(); ++r)
    if (keep_row[r]) row_map[r] = p.add_row(rows[r].sense, rows[r].rhs);

  // transpose the row-wise entries into columns
  std::vector<std::vector<std::pair<int, double>>> by_col(cols.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    if (row_map[r] < 0) continue;
    for (int k = row_start[r]; k < row_start[r + 1]; ++k)
      by_col[entry_col[k]].push_back({row_map[r], entry_coef[k]});
  }
  for (size_t j = 0; j < cols.size(); ++j) {
    p.add_col(cols[j].lo, cols[j].hi, cols[j].obj);
    for (const auto& [r, v] : by_col[j]) p.add_entry(r, v);
  }
  p.obj_const = obj_const;
  return p;
}

Solution ProblemInstance::extract(const std::vector<double>& xval,
                                  double objective) const {
  Solution sol;
  constexpr double kKeep = 1e-9;
  bool integral = true;
  for (int j = 0; j < num_cols(); ++j) {
    const VarInfo& c = cols[j];
    const double v = xval[j];
    if (c.binary_kind && std::abs(v - std::round(v)) > 1e-6) integral = false;
    if (std::abs(v) <= kKeep) continue;
    switch (c.kind) {
      case VarKind::X:
        sol.x[{links[c.link].src, links[c.link].dst}] = v;
        break;
      case VarKind::Y:
        sol.y[nodes[c.node]] = v;
        break;
      case VarKind::Delta:
        sol.delta[{nodes[c.node], vnfs[c.vnf]}] = v;
        break;
      case VarKind::Tau:
        sol.tau[{links[c.link], comms[c.comm]}] = v;
        break;
      case VarKind::Transit:
        sol.transit[{nodes[c.node], comms[c.comm]}] = v;
        break;
      case VarKind::Proc:
        sol.processed[{nodes[c.node], comms[c.comm]}] = v;
        break;
    }
  }
  sol.objective_w = objective;
  sol.integral = integral;
  return sol;
}

void export_lp(const ProblemInstance& inst, std::ostream& os) {
  auto num = [](double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
  };
  os << "\\ optiloop problem instance: " << inst.num_rows() << " rows, "
     << inst.num_cols() << " cols\n";
  os << "Minimize\n obj:";
  bool any = false;
  for (int j = 0; j < inst.num_cols(); ++j) {
    const double c = inst.cols[j].obj;
    if (c == 0.0) continue;
    os << (c >= 0 ? " + " : " - ") << num(std::abs(c)) << " " << inst.col_name(j);
    any = true;
  }
  if (!any) os << " 0 " << inst.col_name(0);
  os << "\nSubject To\n";
  for (int r = 0; r < inst.num_rows(); ++r) {
    os << "\\ " << inst.row_name(r) << "\n";
    os << " c" << r << ":";
    for (int k = inst.row_start[r]; k < inst.row_start[r + 1]; ++k) {
      const double v = inst.entry_coef[k];
      os << (v >= 0 ? " + " : " - ") << num(std::abs(v)) << " "
         << inst.col_name(inst.entry_col[k]);
    }
    switch (inst.rows[r].sense) {
      case lp::Sense::LE: os << " <= "; break;
      case lp::Sense::EQ: os << " = "; break;
      case lp::Sense::GE: os << " >= "; break;
    }
    os << num(inst.rows[r].rhs) << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < inst.num_cols(); ++j) {
    const VarInfo& c = inst.cols[j];
    if (c.lo == 0.0 && c.hi == lp::kInf) continue;
    if (c.lo == c.hi) {
      os << " " << inst.col_name(j) << " = " << num(c.lo) << "\n";
    } else {
      os << " " << num(c.lo) << " <= " << inst.col_name(j) << " <= "
         << (c.hi == lp::kInf ? "+inf" : num(c.hi)) << "\n";
    }
  }
  bool have_int = inst.num_integral() > 0;
  if (have_int) {
    os << "Binaries\n";
    for (int j = 0; j < inst.num_cols(); ++j)
      if (inst.cols[j].integral) os << " " << inst.col_name(j) << "\n";
  }
  os << "End\n";
}

}  // namespace optiloop
