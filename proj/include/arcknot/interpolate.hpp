#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "arcknot/biarc.hpp"
#include "arcknot/curve.hpp"

namespace arcknot {

// Closed chain of biarcs; biarc i joins junction i to junction (i + 1) mod n.
struct BiarcCurve {
  std::vector<Biarc> biarcs;
  std::vector<PointTangent> junctions;
  std::vector<double> lambdas;  // biarc lengths
  std::vector<double> offsets;  // cumulative arclength, n + 1 entries
  double total_length = 0.0;

  // Partition nodes of the source curve when interpolated from one; empty for
  // free configurations.
  std::vector<double> source_nodes;

  std::size_t size() const { return biarcs.size(); }

  // Builds the balanced biarc through every consecutive pair of junctions.
  // Throws NumericalError naming the segment when a pair is improper or
  // incompatible cocircular.
  static BiarcCurve from_junctions(std::vector<PointTangent> junctions);

  // Copy with junction j replaced; only the two adjacent biarcs are rebuilt.
  BiarcCurve with_junction(std::size_t j, const PointTangent& pt) const;
};

struct BuildOptions {
  // Reject partitions whose largest gap h has sampled tangent modulus
  // omega(h) >= 1/2. Without it only properness of every pair is required.
  bool enforce_smallness = false;
  int modulus_grid = 512;
};

BiarcCurve build_biarc_curve(const CurveSpec& curve, const Partition& partition,
                             const BuildOptions& options = {});

// Position and unit tangent at arclength s, taken modulo the total length.
std::pair<Vec3, Vec3> eval_biarc_curve(const BiarcCurve& beta, double s);

// Membership in the length-controlled class: L/(2n) <= lambda_i <= 2L/n.
bool check_Bn(const BiarcCurve& beta, double L, std::size_t n);

// sup_s |c(s) - B(s)| + |c'(s) - B'(s)| over `grid` samples, B = beta o phi with
// phi mapping each partition interval affinely onto its biarc.
double c1_distance(const CurveSpec& curve, const BiarcCurve& beta, int grid);

// Uniform scaling about the origin.
BiarcCurve scaled(const BiarcCurve& beta, double factor);

// Junction records "qx qy qz tx ty tz lambda", one per line, written with 17
// significant digits so a read restores the configuration bit-for-bit.
void write_junctions(std::ostream& os, const BiarcCurve& beta);
BiarcCurve read_junctions(std::istream& is);

}  // namespace arcknot
