#include "rbf/fkm.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace rbf {

namespace {

struct NodeKey {
  long long ix, iy;
  bool operator<(const NodeKey& o) const {
    return ix != o.ix ? ix < o.ix : iy < o.iy;
  }
};

NodeKey key_of(Point2 p, double scale) {
  // Positions come from exact arithmetic on cell corners; a coarse quantum
  // collapses shared nodes generated from adjacent cells.
  const double q = scale * 1e-12;
  return {static_cast<long long>(std::llround(p.x / q)),
          static_cast<long long>(std::llround(p.y / q))};
}

}  // namespace

Partition partition_rectangle(const Domain& domain, int sx, int sy,
                              const SubregionNodeSpec& spec) {
  if (domain.kind() != DomainKind::rectangle)
    throw ValidationError("FKM requires rectangle");
  if (sx < 1 || sy < 1) throw ValidationError("partition grid must be >= 1x1");
  if (spec.per_edge < 1) throw ValidationError("per_edge must be >= 1");

  Partition part;
  part.domain = domain;
  part.sx = sx;
  part.sy = sy;
  const Point2 lo = domain.lo(), hi = domain.hi();
  const double w = (hi.x - lo.x) / sx, h = (hi.y - lo.y) / sy;
  for (int j = 0; j < sy; ++j)
    for (int i = 0; i < sx; ++i)
      part.cells.push_back(Domain::rectangle({lo.x + i * w, lo.y + j * h},
                                             {lo.x + (i + 1) * w,
                                              lo.y + (j + 1) * h}));

  const double scale = domain.diameter();
  std::map<NodeKey, int> index;
  auto add_node = [&](Point2 p, int owner, bool physical, Vec2 normal,
                      Vec2 seam) -> int {
    const NodeKey key = key_of(p, scale);
    auto it = index.find(key);
    if (it == index.end()) {
      FkmNode node;
      node.position = p;
      node.owners = {owner};
      node.physical = physical;
      node.normal = normal;
      node.seam_normal = seam;
      part.nodes.push_back(node);
      index.emplace(key, static_cast<int>(part.nodes.size()) - 1);
      return static_cast<int>(part.nodes.size()) - 1;
    }
    FkmNode& node = part.nodes[it->second];
    if (std::find(node.owners.begin(), node.owners.end(), owner) ==
        node.owners.end())
      node.owners.push_back(owner);
    node.physical = node.physical || physical;
    return it->second;
  };

  // Horizontal grid lines y = lo.y + j*h, split into per-cell segments.
  for (int j = 0; j <= sy; ++j) {
    const double y = lo.y + j * h;
    for (int i = 0; i < sx; ++i) {
      for (int t = 0; t < spec.per_edge; ++t) {
        const Point2 p{lo.x + i * w + (t + 0.5) * w / spec.per_edge, y};
        if (j == 0) {
          add_node(p, i, true, {0, -1}, {0, 0});
        } else if (j == sy) {
          add_node(p, (sy - 1) * sx + i, true, {0, 1}, {0, 0});
        } else {
          add_node(p, (j - 1) * sx + i, false, {0, 0}, {0, 1});
          add_node(p, j * sx + i, false, {0, 0}, {0, 1});
        }
      }
    }
  }
  // Vertical grid lines x = lo.x + i*w.
  for (int i = 0; i <= sx; ++i) {
    const double x = lo.x + i * w;
    for (int j = 0; j < sy; ++j) {
      for (int t = 0; t < spec.per_edge; ++t) {
        const Point2 p{x, lo.y + j * h + (t + 0.5) * h / spec.per_edge};
        if (i == 0) {
          add_node(p, j * sx, true, {-1, 0}, {0, 0});
        } else if (i == sx) {
          add_node(p, j * sx + (sx - 1), true, {1, 0}, {0, 0});
        } else {
          add_node(p, j * sx + (i - 1), false, {0, 0}, {1, 0});
          add_node(p, j * sx + i, false, {0, 0}, {1, 0});
        }
      }
    }
  }
  // Interior cross points of the partition carry four owners.
  for (int i = 1; i < sx; ++i) {
    for (int j = 1; j < sy; ++j) {
      const Point2 p{lo.x + i * w, lo.y + j * h};
      for (int dj = -1; dj <= 0; ++dj)
        for (int di = -1; di <= 0; ++di)
          add_node(p, (j + dj) * sx + (i + di), false, {0, 0}, {1, 0});
    }
  }
  // Interior nodes per cell.
  const int interior_start = static_cast<int>(part.nodes.size());
  for (int j = 0; j < sy; ++j) {
    for (int i = 0; i < sx; ++i) {
      const int cell = j * sx + i;
      for (int iy = 0; iy < spec.interior_y; ++iy)
        for (int ix = 0; ix < spec.interior_x; ++ix)
          add_node({lo.x + i * w + (ix + 0.5) * w / spec.interior_x,
                    lo.y + j * h + (iy + 0.5) * h / spec.interior_y},
                   cell, false, {0, 0}, {0, 0});
    }
  }

  for (auto& node : part.nodes) std::sort(node.owners.begin(), node.owners.end());

  // Contiguous Dirichlet arc on the physical perimeter.
  std::vector<std::pair<double, int>> perimeter;
  for (int id = 0; id < static_cast<int>(part.nodes.size()); ++id) {
    const FkmNode& node = part.nodes[id];
    if (!node.physical) continue;
    const Point2 p = node.position;
    double s;
    if (node.normal.y < -0.5)
      s = p.x - lo.x;
    else if (node.normal.x > 0.5)
      s = (hi.x - lo.x) + (p.y - lo.y);
    else if (node.normal.y > 0.5)
      s = (hi.x - lo.x) + (hi.y - lo.y) + (hi.x - p.x);
    else
      s = 2 * (hi.x - lo.x) + (hi.y - lo.y) + (hi.y - p.y);
    perimeter.push_back({s, id});
  }
  std::sort(perimeter.begin(), perimeter.end());
  const int n_dirichlet = static_cast<int>(
      std::ceil(spec.bc_split * static_cast<double>(perimeter.size())));
  for (std::size_t r = 0; r < perimeter.size(); ++r)
    part.nodes[perimeter[r].second].bc = static_cast<int>(r) < n_dirichlet
                                             ? BcKind::dirichlet
                                             : BcKind::neumann;

  const int ncells = sx * sy;
  part.cell_nodes.resize(ncells);
  part.cell_boundary.resize(ncells);
  part.cell_interior.resize(ncells);
  for (int id = 0; id < static_cast<int>(part.nodes.size()); ++id) {
    const bool interior = id >= interior_start;
    for (int owner : part.nodes[id].owners) {
      part.cell_nodes[owner].push_back(id);
      (interior ? part.cell_interior : part.cell_boundary)[owner].push_back(id);
    }
  }
  return part;
}

NodeSet partition_node_set(const Partition& partition) {
  std::vector<BoundaryNode> dirichlet, neumann;
  std::vector<Point2> interior;
  for (const auto& node : partition.nodes) {
    if (node.physical) {
      BoundaryNode b{node.position, node.normal, node.bc, 0.0};
      (node.bc == BcKind::dirichlet ? dirichlet : neumann).push_back(b);
    } else if (node.owners.size() == 1) {
      interior.push_back(node.position);
    } else {
      throw ValidationError("partition has interface nodes; no flat node set");
    }
  }
  dirichlet.insert(dirichlet.end(), neumann.begin(), neumann.end());
  return NodeSet::create(std::move(dirichlet), std::move(interior));
}

namespace {

enum class Functional { value, normal, oper, dx, dy };

struct EntryEmitter {
  const KernelEntries& entries;
  const Partition& part;
  const std::vector<FkmSolution::ColumnRef>* columns;  // of one cell

  double column_entry(const FkmSolution::ColumnRef& ref, Functional f,
                      Point2 x, Vec2 nx) const {
    const Point2 s = part.nodes[ref.node].position;
    static const Vec2 ex{1, 0}, ey{0, 1};
    const Vec2 dir = ref.kind == 2 ? ex : ey;
    switch (ref.kind) {
      case 0:  // adjoint-operator source
        switch (f) {
          case Functional::value: return entries.op_source(x, s);
          case Functional::normal: return entries.dn_op_source(x, s, nx);
          case Functional::oper: return entries.op_op(x, s);
          case Functional::dx: return entries.grad_op_source(x, s).x;
          case Functional::dy: return entries.grad_op_source(x, s).y;
        }
        break;
      case 1:  // value source
        switch (f) {
          case Functional::value: return entries.value(x, s);
          case Functional::normal: return entries.d_field(x, s, nx);
          case Functional::oper: return entries.op_field(x, s);
          case Functional::dx: return entries.grad_value(x, s).x;
          case Functional::dy: return entries.grad_value(x, s).y;
        }
        break;
      default:  // derivative source along dir
        switch (f) {
          case Functional::value: return entries.d_source(x, s, dir);
          case Functional::normal: return entries.d_mixed(x, s, nx, dir);
          case Functional::oper: return entries.op_of_d_source(x, s, dir);
          case Functional::dx: return entries.grad_d_source(x, s, dir).x;
          case Functional::dy: return entries.grad_d_source(x, s, dir).y;
        }
    }
    return 0.0;
  }
};

}  // namespace

FkmSolution fkm_solve(const ProblemSpec& problem, const Partition& partition,
                      Continuity continuity, const Kernel& kernel) {
  if (!kernel.radial_finite_at_zero(4))
    throw ValidationError(
        "kernel too rough: operator-operator block singular at r=0");
  const KernelEntries entries(problem.op, kernel);
  const int ncells = partition.sx * partition.sy;

  FkmSolution sol;
  sol.continuity = continuity;
  sol.op = problem.op;
  sol.kernel = kernel;
  sol.partition = partition;
  sol.cell_columns.resize(ncells);

  // Column enumeration. Alpha per (cell, node); beta per (cell, boundary
  // node) for C0 and physical nodes, shared per interface node for C1,
  // where the C1 interface nodes also carry shared x/y derivative sources.
  int ncols = 0;
  std::vector<int> shared_beta(partition.nodes.size(), -1);
  std::vector<int> shared_gamma(partition.nodes.size(), -1);
  for (int cell = 0; cell < ncells; ++cell) {
    for (int id : partition.cell_nodes[cell])
      sol.cell_columns[cell].push_back({ncols++, id, 0});
    for (int id : partition.cell_boundary[cell]) {
      const FkmNode& node = partition.nodes[id];
      const bool pure_interface = !node.physical && node.owners.size() > 1;
      if (continuity == Continuity::c1 && pure_interface) {
        if (shared_beta[id] < 0) {
          shared_beta[id] = ncols++;
          shared_gamma[id] = ncols;
          ncols += 2;
        }
        sol.cell_columns[cell].push_back({shared_beta[id], id, 1});
        sol.cell_columns[cell].push_back({shared_gamma[id], id, 2});
        sol.cell_columns[cell].push_back({shared_gamma[id] + 1, id, 3});
      } else {
        sol.cell_columns[cell].push_back({ncols++, id, 1});
      }
    }
  }

  // Row assembly as 1x1 blocks of the sparse system.
  std::vector<Block> blocks;
  Vector rhs = Vector::Zero(0);
  std::vector<double> rhs_values;
  int nrows = 0;
  auto emit = [&](int row, int cell, Functional f, Point2 x, Vec2 nx,
                  double sign) {
    const EntryEmitter emitter{entries, partition, &sol.cell_columns[cell]};
    for (const auto& ref : sol.cell_columns[cell]) {
      const double v = sign * emitter.column_entry(ref, f, x, nx);
      if (v != 0.0) blocks.push_back({row, ref.column, Matrix::Constant(1, 1, v)});
    }
  };
  auto new_row = [&](double rhs_value) {
    rhs_values.push_back(rhs_value);
    return nrows++;
  };

  // Local collocation rows: the governing equation at every node instance.
  for (int cell = 0; cell < ncells; ++cell)
    for (int id : partition.cell_nodes[cell]) {
      const Point2 x = partition.nodes[id].position;
      emit(new_row(problem.source_at(x)), cell, Functional::oper, x, {0, 0},
           1.0);
    }

  // Physical boundary rows and interface continuity rows.
  for (std::size_t id = 0; id < partition.nodes.size(); ++id) {
    const FkmNode& node = partition.nodes[id];
    const Point2 x = node.position;
    if (node.physical) {
      const double data = node.bc == BcKind::dirichlet
                              ? problem.dirichlet_data(x)
                              : problem.neumann_data(x, node.normal);
      const Functional f = node.bc == BcKind::dirichlet ? Functional::value
                                                        : Functional::normal;
      for (int owner : node.owners)
        emit(new_row(data), owner, f, x, node.normal, 1.0);
      continue;
    }
    if (node.owners.size() < 2) continue;  // cell-interior node

    const auto& owners = node.owners;
    // Value chain over adjacent owner pairs.
    for (std::size_t k = 0; k + 1 < owners.size(); ++k) {
      const int row = new_row(0.0);
      emit(row, owners[k], Functional::value, x, {0, 0}, 1.0);
      emit(row, owners[k + 1], Functional::value, x, {0, 0}, -1.0);
    }
    if (continuity == Continuity::c0) {
      // Flux closure along the seam normal (x-pair at 4-owner corners).
      const int row = new_row(0.0);
      emit(row, owners[0], Functional::normal, x, node.seam_normal, 1.0);
      emit(row, owners[1], Functional::normal, x, node.seam_normal, -1.0);
    } else if (owners.size() == 2) {
      // First-derivative matching; corner nodes keep value matching only.
      const int rx = new_row(0.0);
      emit(rx, owners[0], Functional::dx, x, {0, 0}, 1.0);
      emit(rx, owners[1], Functional::dx, x, {0, 0}, -1.0);
      const int ry = new_row(0.0);
      emit(ry, owners[0], Functional::dy, x, {0, 0}, 1.0);
      emit(ry, owners[1], Functional::dy, x, {0, 0}, -1.0);
    }
  }

  if (nrows != ncols)
    throw NumericalError("FKM assembly is not square");
  rhs.resize(nrows);
  for (int i = 0; i < nrows; ++i) rhs[i] = rhs_values[i];

  BlockSparseSystem system = assemble_block_sparse(nrows, ncols, blocks);
  sol.dimension = nrows;
  sol.nonzeros = system.nonzeros();
  SolveReport report = solve_block_sparse(system, rhs);
  sol.coefficients = report.solution.col(0);
  sol.condition = report.condition;
  sol.residual = report.residual_norm;
  return sol;
}

namespace {

int locate_cell(const Partition& part, Point2 x) {
  for (std::size_t c = 0; c < part.cells.size(); ++c) {
    const Domain& cell = part.cells[c];
    if (x.x >= cell.lo().x && x.x <= cell.hi().x && x.y >= cell.lo().y &&
        x.y <= cell.hi().y)
      return static_cast<int>(c);
  }
  throw ValidationError("point outside the partitioned domain");
}

}  // namespace

double fkm_evaluate_in_cell(const FkmSolution& sol, int cell, Point2 x) {
  const KernelEntries entries(sol.op, sol.kernel);
  const EntryEmitter emitter{entries, sol.partition, &sol.cell_columns[cell]};
  double sum = 0.0;
  for (const auto& ref : sol.cell_columns[cell])
    sum += sol.coefficients[ref.column] *
           emitter.column_entry(ref, Functional::value, x, {0, 0});
  return sum;
}

Vec2 fkm_gradient_in_cell(const FkmSolution& sol, int cell, Point2 x) {
  const KernelEntries entries(sol.op, sol.kernel);
  const EntryEmitter emitter{entries, sol.partition, &sol.cell_columns[cell]};
  Vec2 grad{0.0, 0.0};
  for (const auto& ref : sol.cell_columns[cell]) {
    grad.x += sol.coefficients[ref.column] *
              emitter.column_entry(ref, Functional::dx, x, {0, 0});
    grad.y += sol.coefficients[ref.column] *
              emitter.column_entry(ref, Functional::dy, x, {0, 0});
  }
  return grad;
}

double fkm_evaluate(const FkmSolution& sol, Point2 x) {
  return fkm_evaluate_in_cell(sol, locate_cell(sol.partition, x), x);
}

}  // namespace rbf
