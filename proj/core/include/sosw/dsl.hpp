#pragma once

#include <string>

#include "sosw/tss.hpp"

namespace sosw {

// Parses the .tss specification language. Rule schemas are expanded.
// Throws ParseError, Error(Arity), Error(UnknownAction), Error(DuplicateMarking).
TSS parse_spec(const std::string& text);

// Renders a TSS so that parse_spec(print_spec(P)) == P.
std::string print_spec(const TSS& P);

// Parses a single term over the signature. Identifiers that are not declared
// symbols become variables; when closed is set they are rejected instead.
Term parse_term(const Signature& sig, const std::string& text, bool closed = false);

// Parses a rule written as "prem, prem |- concl" (the turnstile may be
// omitted when there are no premises).
Rule parse_rule(const TSS& P, const std::string& text);

}  // namespace sosw
