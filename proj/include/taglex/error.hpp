#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace taglex {

/// Base for every domain error raised by the library. The CLI maps these to
/// exit code 1 and the HTTP layer maps them to 4xx responses.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IllegalTransition : public Error {
public:
    using Error::Error;
};

class UnknownEntry : public Error {
public:
    explicit UnknownEntry(const std::string& id) : Error("unknown entry: " + id), id_(id) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class NotArTagged : public Error {
public:
    using Error::Error;
};

class NothingToStrip : public Error {
public:
    using Error::Error;
};

/// Optimistic-concurrency failure: the caller's view of an entry is stale.
class Conflict : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A pipeline stage was asked to run before its inputs exist.
class StageError : public Error {
public:
    using Error::Error;
};

class EncodingError : public Error {
public:
    EncodingError(std::size_t line_no, const std::string& what)
        : Error("line " + std::to_string(line_no) + ": " + what), line_no_(line_no) {}
    std::size_t line_no() const noexcept { return line_no_; }

private:
    std::size_t line_no_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class MalformedCsv : public Error {
public:
    MalformedCsv(std::size_t line_no, const std::string& what)
        : Error("csv line " + std::to_string(line_no) + ": " + what), line_no_(line_no) {}
    std::size_t line_no() const noexcept { return line_no_; }

private:
    std::size_t line_no_;
};

class BackendUnavailable : public Error {
public:
    using Error::Error;
};

class RateLimitExceeded : public Error {
public:
    using Error::Error;
};

class CorruptJournal : public Error {
public:
    CorruptJournal(std::uint64_t last_good_seq, const std::string& what)
        : Error("corrupt journal after seq " + std::to_string(last_good_seq) + ": " + what),
          last_good_(last_good_seq) {}
    std::uint64_t last_good_seq() const noexcept { return last_good_; }

private:
    std::uint64_t last_good_;
};

class EmptyDistribution : public Error {
public:
    EmptyDistribution() : Error("distribution has no nonzero counts") {}
};

class EmptyLexicon : public Error {
public:
    EmptyLexicon() : Error("no accurate entries to export") {}
};

}  // namespace taglex
