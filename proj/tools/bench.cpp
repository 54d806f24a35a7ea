// Compares the OpenMP elimination/product kernels against the serial
// reference on exact matrices of growing size.

#include <chrono>
#include <iostream>
#include <random>

#include "selfsim/elimination.hpp"

using namespace selfsim::exact;

namespace {

IntMatrix random_matrix(int n, std::mt19937& rng) {
    std::uniform_int_distribution<int> d(-9, 9);
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = d(rng);
    return m;
}

template <class F>
double time_ms(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    int max_n = argc > 1 ? std::atoi(argv[1]) : 160;
    std::mt19937 rng(20240521);
    std::cout << "size   rank_omp_ms  rank_serial_ms   mul_omp_ms  mul_serial_ms\n";
    for (int n = 40; n <= max_n; n += 40) {
        IntMatrix a = random_matrix(n, rng);
        IntMatrix b = random_matrix(n, rng);
        int r1 = 0, r2 = 0;
        IntMatrix p1, p2;
        double t_rank = time_ms([&] { r1 = rank(a); });
        double t_rank_s = time_ms([&] { r2 = rank_serial(a); });
        double t_mul = time_ms([&] { p1 = mul(a, b); });
        double t_mul_s = time_ms([&] { p2 = mul_serial(a, b); });
        if (r1 != r2 || p1 != p2) {
            std::cerr << "kernel mismatch at n=" << n << "\n";
            return 1;
        }
        std::printf("%4d   %11.2f  %14.2f   %10.2f  %13.2f\n", n, t_rank, t_rank_s, t_mul, t_mul_s);
    }
    return 0;
}
