// Plain and compensated (Kahan) accumulation behind one switch, so the
// identity verifier can quantify summation error on explosive paths.
#pragma once

namespace mildex {

enum class SummationMode { Plain, Compensated };

class Accumulator {
  public:
    explicit Accumulator(SummationMode mode = SummationMode::Plain) : mode_(mode) {}

    void add(double x) {
        if (mode_ == SummationMode::Plain) {
            sum_ += x;
            return;
        }
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }

    double total() const { return sum_; }

  private:
    SummationMode mode_;
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace mildex
