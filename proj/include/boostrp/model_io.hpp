#ifndef BOOSTRP_MODEL_IO_HPP
#define BOOSTRP_MODEL_IO_HPP

#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "boostrp/boosting.hpp"

namespace boostrp {

// Text model format, one record per line:
//
//   boostrp-model 1
//   variant <name> | loss <name> | task <name>
//   outputs <d> | features <p> | learning_rate <mu>
//   intercept <d values>
//   stages <M>
//   then per stage:
//     stage <m>
//     target_output <j or -1>
//     projection none | projection <scheme> <seed> <q> <d>
//     [projection_matrix <q*d values, row-major>]
//     rho <d values>
//     tree <n_nodes> <n_leaves> <c>
//     split <feature> <threshold> <n_samples>   (preorder)
//     leaf <n_samples> <c values>
//   end
//
// Doubles are written in shortest round-trip form, so load(save(m)) predicts
// bit-for-bit like m. Projections are regenerated from their seed unless an
// explicit matrix line is present.

inline constexpr int kModelFormatVersion = 1;

struct ModelWriteOptions {
  bool explicit_projections = false;
};

namespace detail {

inline void write_values(std::ostream& out, const auto& v) {
  for (Index i = 0; i < v.size(); ++i) out << ' ' << format_double(v(i));
}

inline void write_tree(std::ostream& out, const RegressionTree& tree) {
  out << "tree " << tree.nodes().size() << ' ' << tree.n_leaves() << ' ' << tree.n_outputs() << '\n';
  // Nodes are stored in preorder already.
  for (const auto& nd : tree.nodes()) {
    if (nd.is_leaf()) {
      out << "leaf " << nd.n_samples;
      write_values(out, tree.leaf_values().row(nd.leaf));
    } else {
      out << "split " << nd.feature << ' ' << format_double(nd.threshold) << ' ' << nd.n_samples;
    }
    out << '\n';
  }
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next non-empty line split into whitespace tokens; first token must be `key`.
  std::vector<std::string> expect(const std::string& key) {
    auto toks = next();
    if (toks.empty() || toks[0] != key) fail("expected '" + key + "'");
    return toks;
  }

  std::vector<std::string> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream ss(line);
      std::vector<std::string> toks;
      for (std::string t; ss >> t;) toks.push_back(t);
      if (!toks.empty()) return toks;
    }
    fail("unexpected end of model file");
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError("model file: " + what, line_no_); }

  double to_double(const std::string& s) const {
    auto v = parse_double(s);
    if (!v) fail("bad number '" + s + "'");
    return *v;
  }
  long long to_int(const std::string& s) const {
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(s, &pos);
      if (pos != s.size()) fail("bad integer '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("bad integer '" + s + "'");
    }
  }
  Vector values(const std::vector<std::string>& toks, std::size_t from, Index count) const {
    if (toks.size() != from + static_cast<std::size_t>(count))
      fail("expected " + std::to_string(count) + " values after '" + toks[0] + "'");
    Vector v(count);
    for (Index i = 0; i < count; ++i) v(i) = to_double(toks[from + static_cast<std::size_t>(i)]);
    return v;
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

inline RegressionTree read_tree(LineReader& r, Index n_features) {
  const auto head = r.expect("tree");
  if (head.size() != 4) r.fail("tree header needs 3 fields");
  const auto n_nodes = r.to_int(head[1]);
  const auto n_leaves = r.to_int(head[2]);
  const auto c = r.to_int(head[3]);
  if (n_nodes < 1 || n_leaves < 1 || c < 1 || n_nodes != 2 * n_leaves - 1) r.fail("inconsistent tree header");
  std::vector<TreeNode> nodes;
  Matrix leaves(n_leaves, c);
  Index leaf_count = 0;
  std::function<Index()> read_node = [&]() -> Index {
    const auto toks = r.next();
    const auto id = static_cast<Index>(nodes.size());
    if (id >= n_nodes) r.fail("more tree nodes than declared");
    nodes.push_back(TreeNode{});
    if (toks[0] == "leaf") {
      if (toks.size() < 2) r.fail("leaf needs a sample count");
      if (leaf_count >= n_leaves) r.fail("more leaves than declared");
      nodes.back().n_samples = r.to_int(toks[1]);
      nodes.back().leaf = leaf_count;
      leaves.row(leaf_count++) = r.values(toks, 2, c).transpose();
    } else if (toks[0] == "split") {
      if (toks.size() != 4) r.fail("split needs feature, threshold and sample count");
      const auto f = r.to_int(toks[1]);
      if (f < 0 || f >= n_features) r.fail("split feature out of range");
      nodes.back().feature = f;
      nodes.back().threshold = r.to_double(toks[2]);
      nodes.back().n_samples = r.to_int(toks[3]);
      const Index l = read_node();
      const Index rr = read_node();
      nodes[static_cast<std::size_t>(id)].left = l;
      nodes[static_cast<std::size_t>(id)].right = rr;
    } else {
      r.fail("expected 'split' or 'leaf'");
    }
    return id;
  };
  read_node();
  if (static_cast<long long>(nodes.size()) != n_nodes || leaf_count != n_leaves) r.fail("tree node count mismatch");
  return RegressionTree(std::move(nodes), std::move(leaves), n_features);
}

}  // namespace detail

inline void write_model(std::ostream& out, const BoostedEnsemble& m, ModelWriteOptions opt = {}) {
  using detail::format_double;
  out << "boostrp-model " << kModelFormatVersion << '\n';
  out << "variant " << to_string(m.variant) << '\n';
  out << "loss " << to_string(m.loss) << '\n';
  out << "task " << to_string(m.task) << '\n';
  out << "outputs " << m.n_outputs() << '\n';
  out << "features " << m.n_features << '\n';
  out << "learning_rate " << format_double(m.learning_rate) << '\n';
  out << "intercept";
  detail::write_values(out, m.rho0);
  out << '\n';
  out << "stages " << m.stages.size() << '\n';
  for (std::size_t s = 0; s < m.stages.size(); ++s) {
    const auto& st = m.stages[s];
    out << "stage " << s + 1 << '\n';
    out << "target_output " << (st.target_output ? *st.target_output : Index{-1}) << '\n';
    if (st.projection) {
      const auto& p = *st.projection;
      out << "projection " << to_string(p.scheme) << ' ' << p.seed.value << ' ' << p.q() << ' ' << p.d() << '\n';
      if (opt.explicit_projections) {
        out << "projection_matrix";
        for (Index i = 0; i < p.q(); ++i) detail::write_values(out, p.entries.row(i));
        out << '\n';
      }
    } else {
      out << "projection none\n";
    }
    out << "rho";
    detail::write_values(out, st.rho);
    out << '\n';
    detail::write_tree(out, st.tree);
  }
  out << "end\n";
}

inline BoostedEnsemble read_model(std::istream& in) {
  detail::LineReader r(in);
  const auto magic = r.next();
  if (magic.size() != 2 || magic[0] != "boostrp-model") r.fail("not a boostrp model file");
  if (r.to_int(magic[1]) != kModelFormatVersion)
    throw ValidationError("unsupported model format version " + magic[1]);

  auto single = [&](const char* key) {
    auto t = r.expect(key);
    if (t.size() != 2) r.fail(std::string(key) + " takes one value");
    return t[1];
  };
  BoostedEnsemble m;
  try {
    m.variant = parse_variant(single("variant"));
    m.loss = parse_loss(single("loss"));
    m.task = parse_task(single("task"));
  } catch (const ConfigError& e) {
    r.fail(e.what());
  }
  const auto d = r.to_int(single("outputs"));
  m.n_features = r.to_int(single("features"));
  if (d < 1 || m.n_features < 1) r.fail("outputs and features must be positive");
  m.learning_rate = r.to_double(single("learning_rate"));
  m.rho0 = r.values(r.expect("intercept"), 1, d);
  const auto n_stages = r.to_int(single("stages"));
  if (n_stages < 0) r.fail("negative stage count");
  m.stages.reserve(static_cast<std::size_t>(n_stages));
  for (long long s = 0; s < n_stages; ++s) {
    if (r.to_int(single("stage")) != s + 1) r.fail("stages out of order");
    Stage st;
    const auto target = r.to_int(single("target_output"));
    if (target >= d) r.fail("target_output out of range");
    if (target >= 0) st.target_output = target;

    auto proj = r.expect("projection");
    std::vector<std::string> next;
    if (proj.size() == 2 && proj[1] == "none") {
      next = r.next();
    } else if (proj.size() == 5) {
      ProjectionScheme scheme{};
      try {
        scheme = parse_projection(proj[1]);
      } catch (const ConfigError& e) {
        r.fail(e.what());
      }
      const RngSeed seed{std::stoull(proj[2])};
      const auto q = r.to_int(proj[3]);
      if (r.to_int(proj[4]) != d || q < 1) r.fail("projection shape mismatch");
      next = r.next();
      if (next[0] == "projection_matrix") {
        const Vector flat = r.values(next, 1, q * d);
        ProjectionMatrix p{scheme, seed, Matrix(q, d)};
        for (Index i = 0; i < q; ++i) p.entries.row(i) = flat.segment(i * d, d).transpose();
        st.projection = std::move(p);
        next = r.next();
      } else {
        st.projection = draw_projection(scheme, q, d, seed);
      }
    } else {
      r.fail("malformed projection line");
    }
    if (next[0] != "rho") r.fail("expected 'rho'");
    st.rho = r.values(next, 1, d);
    st.tree = detail::read_tree(r, m.n_features);
    if (st.tree.n_outputs() != 1 && st.tree.n_outputs() != d) r.fail("tree output width must be 1 or d");
    m.stages.push_back(std::move(st));
  }
  r.expect("end");
  return m;
}

inline void save_model(const std::string& path, const BoostedEnsemble& m, ModelWriteOptions opt = {}) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_model(out, m, opt);
  if (!out) throw Error("write to '" + path + "' failed");
}

inline BoostedEnsemble load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_model(in);
}

}  // namespace boostrp

#endif  // BOOSTRP_MODEL_IO_HPP
