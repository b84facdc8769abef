#ifndef FUSEREG_COMMON_HPP
#define FUSEREG_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fusereg {

// Error taxonomy mirrored by the CLI exit codes: Config -> 2, Data -> 3,
// Solver -> 4. Every message is prefixed with a stage label so failures
// deep inside a pipeline still say where they happened.
enum class ErrorStage { Config, Data, Solver };

class Error : public std::runtime_error {
 public:
  Error(ErrorStage stage, const std::string& message)
      : std::runtime_error(label(stage) + message), stage_(stage) {}

  ErrorStage stage() const { return stage_; }

  static std::string label(ErrorStage stage) {
    switch (stage) {
      case ErrorStage::Config: return "[config] ";
      case ErrorStage::Data: return "[data] ";
      case ErrorStage::Solver: return "[solver] ";
    }
    return "[?] ";
  }

 private:
  ErrorStage stage_;
};

inline Error config_error(const std::string& m) { return Error(ErrorStage::Config, m); }
inline Error data_error(const std::string& m) { return Error(ErrorStage::Data, m); }
inline Error solver_error(const std::string& m) { return Error(ErrorStage::Solver, m); }

// Execution policy for the replicate-level kernels. Serial is the reference
// path; Parallel runs the same per-index work under OpenMP. Both must produce
// bit-identical results because every index owns its RNG substream.
enum class Execution { Serial, Parallel };

}  // namespace fusereg

#endif  // FUSEREG_COMMON_HPP
