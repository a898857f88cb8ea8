#include <flatdeform/linalg.hpp>

#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
#endif

using namespace flatdeform;

namespace {

double now()
{
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

uint64_t state = 0x2545f4914f6cdd1dull;
int rnd(int lo, int hi)
{
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return lo + static_cast<int>(state % (hi - lo + 1));
}

RatMatrix random_matrix(int n)
{
    RatMatrix m(n, std::vector<Rational>(n));
    for (auto& row : m)
        for (auto& x : row)
            x = Rational(rnd(-9, 9));
    return m;
}

} // namespace

int main(int argc, char** argv)
{
    int threads = 0;
#ifdef _OPENMP
    threads = omp_get_max_threads();
    if (const char* env = std::getenv("FLATDEFORM_THREADS")) {
        threads = std::atoi(env);
        if (threads > 0)
            omp_set_num_threads(threads);
    }
#endif
    std::printf("exact rank, fraction-free elimination (threads: %d)\n\n", threads);
    std::printf("%8s %12s %12s %9s\n", "size", "serial [s]", "parallel [s]", "speedup");

    int sizes_default[] = {96, 144, 192};
    for (int t = 0; t < 3; ++t) {
        int n = argc > 1 + t ? std::atoi(argv[1 + t]) : sizes_default[t];
        if (n <= 0)
            continue;
        RatMatrix m = random_matrix(n);
        double t0 = now();
        int rs = rank_bareiss_serial(m);
        double t1 = now();
        int rp = rank_bareiss(m);
        double t2 = now();
        if (rs != rp) {
            std::fprintf(stderr, "rank mismatch: serial %d vs parallel %d\n", rs, rp);
            return 1;
        }
        std::printf("%8d %12.3f %12.3f %8.2fx\n", n, t1 - t0, t2 - t1,
                    (t2 - t1) > 0 ? (t1 - t0) / (t2 - t1) : 0.0);
    }
    return 0;
}
