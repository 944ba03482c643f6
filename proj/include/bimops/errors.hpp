#pragma once

#include <stdexcept>
#include <string>

namespace bimops {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularMatrix : public Error {
public:
    SingularMatrix() : Error("singular matrix") {}
    explicit SingularMatrix(const std::string& what) : Error(what) {}
};

class NotSymmetric : public Error {
public:
    using Error::Error;
};

class MomentUnavailable : public Error {
public:
    MomentUnavailable(int h, int k)
        : Error("moment (" + std::to_string(h) + "," + std::to_string(k) + ") unavailable"), h_(h), k_(k) {}
    int h() const noexcept { return h_; }
    int k() const noexcept { return k_; }

private:
    int h_;
    int k_;
};

class NonPositiveMass : public Error {
public:
    using Error::Error;
};

/// Carries the first degree at which the moment problem stops being positive definite.
class NotQuasiDefinite : public Error {
public:
    explicit NotQuasiDefinite(int degree, const std::string& context = {})
        : Error("not quasi-definite at degree " + std::to_string(degree) +
                (context.empty() ? std::string{} : " (" + context + ")")),
          degree_(degree) {}
    int degree() const noexcept { return degree_; }

private:
    int degree_;
};

class InsufficientDepth : public Error {
public:
    using Error::Error;
};

class DecompositionMismatch : public Error {
public:
    using Error::Error;
};

class NotChristoffelPair : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration; `field()` is a JSON-pointer-like path.
class ConfigInvalid : public Error {
public:
    ConfigInvalid(std::string field, const std::string& why)
        : Error("invalid config at " + field + ": " + why), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IoFailure : public Error {
public:
    using Error::Error;
};

} // namespace bimops
