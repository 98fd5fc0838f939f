// Wall-clock comparison of the serial reference kernels against their
// OpenMP-parallel counterparts; the outputs are asserted identical first.

#include <omp.h>

#include <chrono>
#include <cstdio>

#include "zetadyn/render.hpp"

using namespace zetadyn;
using Clock = std::chrono::steady_clock;

namespace {

double seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <class F>
double timed(F&& f) {
  auto t0 = Clock::now();
  f();
  return seconds(t0, Clock::now());
}

void report(const char* name, double serial, double parallel, bool identical) {
  std::printf("%-28s serial %8.3fs   omp %8.3fs   speedup %5.2fx   outputs %s\n", name, serial,
              parallel, serial / parallel, identical ? "identical" : "DIFFER");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  PrecisionContext rctx = PrecisionContext::make(30, 10);

  // warm the shared caches (pi, phi, Bernoulli) so neither variant pays them
  orbit::forward_classify(rctx.complex(0.1, 0.1), 4, rctx);
  zeta(PrecisionContext::make(300).complex(2, 14), PrecisionContext::make(300));

  {
    rootfind::Box box{rctx.complex(0, 0), 120.0};
    render::QuadrantImage a, b;
    double ts = timed([&] {
      a = render::quadrant_plot(FunctionSpec::zeta(), rctx.complex(0, 0), box, 64, 10.0, rctx,
                                Exec::Serial);
    });
    double tp = timed([&] {
      b = render::quadrant_plot(FunctionSpec::zeta(), rctx.complex(0, 0), box, 64, 10.0, rctx,
                                Exec::Parallel);
    });
    report("quadrant_plot 64x64", ts, tp, a.pixels == b.pixels && a.error_mask == b.error_mask);
  }

  {
    rootfind::Box box{rctx.complex(-0.3, 0.2), 4.0};
    render::BasinImage a, b;
    double ts = timed([&] { a = render::basin_plot(box, 48, 30, rctx, Exec::Serial); });
    double tp = timed([&] { b = render::basin_plot(box, 48, 30, rctx, Exec::Parallel); });
    report("basin_plot 48x48", ts, tp, a.pixels == b.pixels);
  }

  {
    PrecisionContext ctx = PrecisionContext::make(300);
    const long n = 64;
    std::vector<mp::Complex> out_s(n, ctx.complex(0, 0)), out_p(n, ctx.complex(0, 0));
    auto kernel = [&](std::vector<mp::Complex>& out, Exec mode) {
      parallel_for(n, mode, [&](long i) {
        out[i] = zeta(ctx.complex(-2.0 + 0.05 * i, 14.0 + 0.3 * i), ctx);
      });
    };
    double ts = timed([&] { kernel(out_s, Exec::Serial); });
    double tp = timed([&] { kernel(out_p, Exec::Parallel); });
    bool same = true;
    for (long i = 0; i < n; ++i) same = same && out_s[i] == out_p[i];
    report("zeta batch 64 @ 300 digits", ts, tp, same);
  }

  {
    PrecisionContext cls = PrecisionContext::make(40, 10);
    rootfind::Box box{cls.complex(0.5, 14.0), 2.0};
    std::vector<rootfind::Box> a, b;
    double ts = timed([&] {
      a = rootfind::grid_localize(FunctionSpec::zeta(), cls.complex(0, 0), box, 48, cls, 0.0,
                                  Exec::Serial);
    });
    double tp = timed([&] {
      b = rootfind::grid_localize(FunctionSpec::zeta(), cls.complex(0, 0), box, 48, cls, 0.0,
                                  Exec::Parallel);
    });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i)
      same = a[i].center == b[i].center && a[i].side == b[i].side;
    report("grid_localize 48x48", ts, tp, same);
  }

  return 0;
}
