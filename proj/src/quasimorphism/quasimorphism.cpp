#include "treeqm/quasimorphism.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <random>
#include <thread>

#include "treeqm/error.hpp"

namespace treeqm {

  ////////////////////////////////////////////////////////////////////////
  // SparseChain
  ////////////////////////////////////////////////////////////////////////

  void SparseChain::add(OrientedPath const& p, std::int64_t value) {
    if (value == 0) {
      return;
    }
    auto [it, fresh] = _entries.try_emplace(p, value);
    if (!fresh) {
      it->second += value;
      if (it->second == 0) {
        _entries.erase(it);
      }
    }
  }

  std::int64_t SparseChain::at(OrientedPath const& p) const {
    auto it = _entries.find(p);
    return it == _entries.end() ? 0 : it->second;
  }

  std::int64_t SparseChain::l1() const {
    std::int64_t total = 0;
    for (auto const& [p, x] : _entries) {
      total += x < 0 ? -x : x;
    }
    return total;
  }

  SparseChain& SparseChain::operator+=(SparseChain const& other) {
    for (auto const& [p, x] : other._entries) {
      add(p, x);
    }
    return *this;
  }

  SparseChain& SparseChain::operator-=(SparseChain const& other) {
    for (auto const& [p, x] : other._entries) {
      add(p, -x);
    }
    return *this;
  }

  ////////////////////////////////////////////////////////////////////////
  // windows and omega
  ////////////////////////////////////////////////////////////////////////

  QmSpec make_spec(TreeView const& view, OrientedPath const& s, WindowMode mode) {
    QmSpec spec;
    spec.mode = mode;
    if (mode == WindowMode::metric) {
      spec.n = view.length(s);
    } else {
      if (!view.is_o_vertex(s.from) || !view.is_o_vertex(s.to)) {
        throw Error(ErrorKind::PreconditionViolated,
                    "an orbit-mode segment must join two o-vertices");
      }
      spec.n = *view.o_length(s);
    }
    if (spec.n == 0) {
      throw Error(ErrorKind::PreconditionViolated, "the segment is trivial");
    }
    spec.orbit = view.orbit_key(s);
    return spec;
  }

  std::vector<OrientedPath> windows(TreeView const& view,
                                    Vertex const&   x,
                                    Vertex const&   y,
                                    std::size_t     n,
                                    WindowMode      mode) {
    OrientedPath const        path{x, y};
    Geodesic const            geo(view, path);
    std::vector<OrientedPath> out;
    for (auto [i, j] : geo.windows(n, mode)) {
      out.push_back(geo.subpath(i, j));
    }
    return out;
  }

  SparseChain omega(TreeView const& view, Element const& g, std::size_t n, WindowMode mode) {
    SparseChain  out;
    Vertex const v  = view.base();
    Vertex const gv = view.act(g, v);
    for (auto const& w : windows(view, v, gv, n, mode)) {
      out.add(w, 1);
      out.add(w.reversed(), -1);
    }
    return out;
  }

  SparseChain translate(TreeView const& view, Element const& g, SparseChain const& chain) {
    SparseChain out;
    for (auto const& [p, x] : chain.entries()) {
      out.add(view.act(g, p), x);
    }
    return out;
  }

  SparseChain coboundary_chain(TreeView const& view,
                               Element const&  g,
                               Element const&  h,
                               std::size_t     n,
                               WindowMode      mode) {
    auto const& inst = view.instance();
    SparseChain out  = translate(view, g, omega(view, h, n, mode));
    out -= omega(view, inst.multiply(g, h), n, mode);
    out += omega(view, g, n, mode);
    return out;
  }

  std::int64_t median_qm(TreeView const& view, QmSpec const& spec, Element const& g) {
    OrientedPath const path{view.base(), view.act(g, view.base())};
    Geodesic const     geo(view, path);
    std::int64_t       total = 0;
    for (auto [i, j] : geo.windows(spec.n, spec.mode)) {
      if (geo.key(i, j) == spec.orbit) {
        ++total;
      }
      if (geo.reverse_key(i, j) == spec.orbit) {
        --total;
      }
    }
    return total;
  }

  std::map<OrbitKey, std::int64_t> orbit_profile(TreeView const& view,
                                                 Element const&  g,
                                                 std::size_t     n,
                                                 WindowMode      mode) {
    OrientedPath const               path{view.base(), view.act(g, view.base())};
    Geodesic const                   geo(view, path);
    std::map<OrbitKey, std::int64_t> out;
    for (auto [i, j] : geo.windows(n, mode)) {
      ++out[geo.key(i, j)];
      --out[geo.reverse_key(i, j)];
    }
    std::erase_if(out, [](auto const& kv) { return kv.second == 0; });
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // defect_scan
  ////////////////////////////////////////////////////////////////////////

  DefectResult defect_scan(TreeView const&      view,
                           QmSpec const&        spec,
                           std::size_t          radius,
                           DefectOptions const& options) {
    auto const& inst = view.instance();
    auto const  ball = view.element_ball(2 * radius, options.budget);
    std::size_t const N = ball.size();

    std::vector<std::int64_t> f(N);
    for (std::size_t i = 0; i < N; ++i) {
      f[i] = median_qm(view, spec, ball[i]);
    }

    // the pairs to scan, as indices into ball
    std::vector<std::pair<std::size_t, std::size_t>> sampled;
    std::size_t                                      total;
    if (options.sample) {
      std::mt19937_64 rng(options.seed);
      sampled.reserve(*options.sample);
      for (std::size_t k = 0; k < *options.sample; ++k) {
        auto const a = static_cast<std::size_t>(rng() % N);
        auto const b = static_cast<std::size_t>(rng() % N);
        sampled.emplace_back(a, b);
      }
      total = sampled.size();
    } else {
      total = N * N;
    }

    struct Best {
      std::int64_t defect = -1;
      std::size_t  index  = 0;
    };
    std::size_t const    nthreads = std::max<std::size_t>(1, options.threads);
    std::size_t const    chunk    = std::max<std::size_t>(1, N);
    std::vector<Best>    best(nthreads);
    std::atomic<size_t>  next{0};

    auto work = [&](std::size_t t) {
      Best local;
      while (true) {
        std::size_t const start = next.fetch_add(chunk);
        if (start >= total) {
          break;
        }
        std::size_t const stop = std::min(total, start + chunk);
        for (std::size_t k = start; k < stop; ++k) {
          auto const [a, b] = options.sample ? sampled[k] : std::pair{k / N, k % N};
          std::int64_t const fgh = median_qm(view, spec, inst.multiply(ball[a], ball[b]));
          std::int64_t       d   = f[a] + f[b] - fgh;
          d                      = d < 0 ? -d : d;
          if (d > local.defect || (d == local.defect && k < local.index)) {
            local = {d, k};
          }
        }
      }
      best[t] = local;
    };

    if (nthreads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back(work, t);
      }
      for (auto& th : pool) {
        th.join();
      }
    }

    Best overall;
    for (auto const& b : best) {
      if (b.defect > overall.defect || (b.defect == overall.defect && b.index < overall.index)) {
        overall = b;
      }
    }
    DefectResult out;
    out.elements = N;
    out.pairs    = total;
    out.g = out.h = inst.identity();
    if (total > 0) {
      auto const [a, b] = options.sample ? sampled[overall.index]
                                         : std::pair{overall.index / N, overall.index % N};
      out.max_defect = overall.defect;
      out.g          = ball[a];
      out.h          = ball[b];
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // homogenize
  ////////////////////////////////////////////////////////////////////////

  Rational Rational::make(std::int64_t num, std::int64_t den) {
    if (den == 0) {
      throw Error(ErrorKind::PreconditionViolated, "zero denominator");
    }
    if (den < 0) {
      num = -num;
      den = -den;
    }
    auto const g = std::gcd(num, den);
    return {num / g, den / g};
  }

  std::string Rational::to_string() const {
    if (den == 1) {
      return std::to_string(num);
    }
    return std::to_string(num) + "/" + std::to_string(den);
  }

  Homogenization homogenize(TreeView const& view,
                            QmSpec const&   spec,
                            Element const&  g,
                            std::size_t     zmax) {
    if (zmax < 3) {
      throw Error(ErrorKind::PreconditionViolated, "zmax must be at least 3");
    }
    auto const&    inst = view.instance();
    Homogenization out;
    Element        power = inst.identity();
    for (std::size_t z = 1; z <= zmax; ++z) {
      power = inst.multiply(power, g);
      out.values.push_back(median_qm(view, spec, power));
    }
    // differences f(g^z) - f(g^(z-1)), z = 1..zmax, with f(e) = 0
    std::vector<std::int64_t> diff(zmax);
    for (std::size_t z = 0; z < zmax; ++z) {
      diff[z] = out.values[z] - (z == 0 ? 0 : out.values[z - 1]);
    }
    std::size_t const tail = (zmax + 1) / 2;
    out.stabilized         = std::all_of(diff.end() - static_cast<std::ptrdiff_t>(tail),
                                 diff.end(),
                                 [&](std::int64_t d) { return d == diff.back(); });
    if (out.stabilized) {
      out.limit = Rational::make(diff.back(), 1);
    } else {
      out.limit = Rational::make(out.values.back(), static_cast<std::int64_t>(zmax));
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // axis
  ////////////////////////////////////////////////////////////////////////

  std::int64_t translation_length(TreeView const& view, Element const& g) {
    Vertex const v   = view.base();
    Vertex const gv  = view.act(g, v);
    Vertex const ggv = view.act(g, gv);
    return static_cast<std::int64_t>(view.distance(v, ggv))
           - static_cast<std::int64_t>(view.distance(v, gv));
  }

  OrientedPath axis_segment(TreeView const& view, Element const& g) {
    std::int64_t const ell = translation_length(view, g);
    if (ell <= 0) {
      throw Error(ErrorKind::EllipticElement,
                  "element fixes a vertex: " + view.instance().format(g));
    }
    Vertex const v  = view.base();
    Vertex const gv = view.act(g, v);
    auto const   vs = view.vertices(OrientedPath{v, gv});
    auto const   d  = static_cast<std::int64_t>(vs.size()) - 1;
    // the projection of v to the axis sits (d - ell) / 2 along [v, gv]; from
    // there on, the path runs along the axis for at least ell steps
    auto const q = static_cast<std::size_t>((d - ell) / 2);
    for (std::size_t k = q; k <= q + 1 && k < vs.size(); ++k) {
      if (view.is_o_vertex(vs[k])) {
        return OrientedPath{vs[k], view.act(g, vs[k])};
      }
    }
    throw Error(ErrorKind::NoOrbitVertexOnAxis,
                "no o-vertex next to the projection of v onto the axis");
  }

}  // namespace treeqm
