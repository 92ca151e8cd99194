#ifndef ARCS_COLORING_HPP_
#define ARCS_COLORING_HPP_

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace arcs
{
/// Basic closed piece of a finite-resolution Cantor set.
struct Box
{
  int level = 0;
  std::uint64_t index = 0;
  double lo = 0;
  double hi = 0;

  double center() const { return 0.5 * (lo + hi); }
  double half() const { return 0.5 * (hi - lo); }
  double diam() const { return hi - lo; }
};

/// Triadic: the middle-thirds Cantor set on [lo, hi]. Dyadic: [lo, hi] split in halves,
/// where siblings sharing an endpoint do not count as disjoint.
struct CantorAmbient
{
  enum class Kind
  {
    triadic,
    dyadic
  };
  Kind kind = Kind::triadic;
  double lo = 0;
  double hi = 1;
  int max_level = 20;

  Box box(int level, std::uint64_t index) const;
  double width(int level) const;
  int branching() const { return 2; }
  /// Smallest level whose boxes have diameter <= target.
  int level_for_diam(double target) const;
  /// Descendant of `b` at `level`, numbered from 0 left to right.
  Box descendant(const Box & b, int level, std::uint64_t k) const;
  bool disjoint(const Box & a, const Box & b) const;
};

struct Verdict
{
  bool in_w = false;
  double margin = 0;  // every pair within this max-norm distance is also in W
};

struct PairColoring
{
  std::function<Verdict(double, double)> oracle;
  std::string name;
};

PairColoring off_diagonal_coloring();
PairColoring empty_coloring();
/// W = {|x - y| > threshold}.
PairColoring distance_coloring(double threshold);
/// Pairs whose direction gamma(x) - gamma(y) has angle (mod pi) in the open arc (lo, hi), radians.
PairColoring direction_cover(std::function<std::pair<double, double>(double)> gamma, double lipschitz, double lo, double hi,
                             std::string name);

class SymmetryError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class CoverError : public std::runtime_error
{
public:
  CoverError(const std::string & what, double x, double y) : std::runtime_error(what), x_(x), y_(y) {}
  std::pair<double, double> pair() const { return {x_, y_}; }

private:
  double x_, y_;
};

struct TreeNode
{
  std::string address;  // binary string s
  Box box;
  int parent = -1;
  int child[2] = {-1, -1};
  // split certificate (set on internal nodes)
  bool split = false;
  double margin = 0;
  int cover_index = -1;
  // image box for diagonal extensions
  double img_lo = 0;
  double img_hi = 0;
};

struct ColoringTree
{
  CantorAmbient ambient;
  std::vector<TreeNode> nodes;  // breadth-first; nodes[0] is the root
  int depth = 0;
  std::size_t probes = 0;

  std::vector<std::size_t> leaves() const;
  int find(const std::string & address) const;
};

struct Probe
{
  Box first;
  Box second;
  bool in_w = false;
  double margin = 0;
};

struct FreeSetReport
{
  std::string address;
  Box box;
  int probe_level = 0;  // deepest refinement probed
  std::vector<Probe> failed_probes;
  ColoringTree partial;
};

using DichotomyResult = std::variant<ColoringTree, FreeSetReport>;

inline constexpr int kProbeBudget = 64;

/// Builds a W-connected tree of the given depth or reports the first node (breadth-first)
/// where no certified split was found.
DichotomyResult soca_dichotomy(const CantorAmbient & e, const PairColoring & w, int depth);

/// As soca_dichotomy, certifying each split by the first cover that contains it;
/// the node records that cover's index.
DichotomyResult cover_refine(const CantorAmbient & e, const std::vector<PairColoring> & covers, int depth);

struct TreeCheck
{
  bool ok = true;
  std::size_t pairs_checked = 0;
  std::vector<std::string> problems;
};

/// Diameter bound, nested disjoint children, and every pair of distinct leaves
/// (left endpoints and centres) certified in W.
TreeCheck verify_connected_tree(const ColoringTree & t, const PairColoring & w);

struct LeafValue
{
  std::size_t node = 0;
  double x = 0;     // representative point of E in the leaf (its left end)
  double ghat = 0;  // centre of the final nested image box
};

struct DiagonalExtension
{
  ColoringTree tree;
  std::vector<LeafValue> leaves;
  double mesh = 0;  // largest sample inflation used
  std::vector<std::pair<double, double>> modulus;  // (delta, max |ghat(x) - ghat(y)| over leaves within delta)
};

/// Continuous mode: g is sampled on cross pairs inside each node and the image box is
/// inflated by the sampled Lipschitz constant times the sample mesh.
DiagonalExtension diagonal_extend(const std::function<double(double, double)> & g, const CantorAmbient & e, int depth,
                                  int sample_levels = 4);

struct SampledDiagonal
{
  std::vector<double> ghat;    // one per input abscissa
  std::vector<double> final_diam;
  double mesh = 0;             // largest nearest-neighbour distance among samples
};

/// Finite mode: for each sample x_i, nested dyadic boxes over the sample hull; H^n is the range
/// of g over sample pairs in the level-n box (a lone sample also takes its nearest neighbour),
/// intersected with H^{n-1}; ghat = centre of H^depth.
SampledDiagonal diagonal_extend_sampled(const std::vector<double> & xs, const std::function<double(std::size_t, std::size_t)> & g,
                                        int depth);

nlohmann::json to_json(const ColoringTree & t);
nlohmann::json to_json(const FreeSetReport & r);

}  // namespace arcs

#endif  // ARCS_COLORING_HPP_
