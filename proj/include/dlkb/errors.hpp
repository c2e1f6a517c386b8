#pragma once

#include <stdexcept>
#include <string>

namespace dlkb {

// Base for every domain error the library raises. Tools map these to exit
// code 1 and services to 4xx/5xx; anything else is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Knowledge-base construction rejected an axiom or assertion.
class KbError : public Error {
 public:
  using Error::Error;
};

class NoExistentialFillers : public Error {
 public:
  using Error::Error;
};

// The reasoner met input outside the supported fragment.
class UnsupportedConstruct : public Error {
 public:
  using Error::Error;
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class InconsistentKb : public Error {
 public:
  InconsistentKb() : Error("knowledge base is inconsistent") {}
};

class UnmappedName : public Error {
 public:
  using Error::Error;
};

}  // namespace dlkb
