#include "lrdspec/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "lrdspec/errors.hpp"

namespace lrdspec {

namespace {

std::mutex plan_mutex;
std::map<std::pair<std::size_t, int>, fftw_plan> plan_cache;

fftw_plan plan_for(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    const auto key = std::make_pair(n, sign);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;
    // Plan on a scratch buffer; executed later on caller arrays via the
    // new-array interface. FFTW_UNALIGNED tolerates std::vector storage.
    std::vector<std::complex<double>> scratch(n);
    auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan =
        fftw_plan_dft_1d(static_cast<int>(n), ptr, ptr, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw NumericalError("fftw: planning failed");
    plan_cache.emplace(key, plan);
    return plan;
}

void execute(std::vector<std::complex<double>>& data, int sign) {
    if (data.empty()) throw ValidationError("fft: empty input");
    fftw_plan plan = plan_for(data.size(), sign);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace

void fft_forward(std::vector<std::complex<double>>& data) { execute(data, FFTW_FORWARD); }
void fft_inverse(std::vector<std::complex<double>>& data) { execute(data, FFTW_BACKWARD); }

}  // namespace lrdspec
