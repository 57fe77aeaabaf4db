#pragma once

#include <stdexcept>

namespace librelog {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input / ingestion
class FileNotReadableError : public Error { public: using Error::Error; };
class EmptyInputError : public Error { public: using Error::Error; };
class MissingColumnError : public Error { public: using Error::Error; };
class DuplicateLineIdError : public Error { public: using Error::Error; };

// Tokenization / grouping
class EmptyContentError : public Error { public: using Error::Error; };
class LengthMismatchError : public Error { public: using Error::Error; };

// Selection
class EmptyTokenSetError : public Error { public: using Error::Error; };
class EmptyGroupError : public Error { public: using Error::Error; };

// Backend
class TransportError : public Error { public: using Error::Error; };
class MalformedResponseError : public Error { public: using Error::Error; };
class MalformedLogListError : public Error { public: using Error::Error; };
class UnequalTokenLengthError : public Error { public: using Error::Error; };

// Prompting
class EmptyLogListError : public Error { public: using Error::Error; };
class UnparseableResponseError : public Error { public: using Error::Error; };

// Evaluation
class KeyMismatchError : public Error { public: using Error::Error; };

} // namespace librelog
