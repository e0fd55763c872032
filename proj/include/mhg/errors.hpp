#ifndef MHG_ERRORS_HPP
#define MHG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mhg {

// Base class for all typed errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define MHG_DEFINE_ERROR(name)                                  \
  class name : public Error {                                   \
   public:                                                      \
    using Error::Error;                                         \
    const char* kind() const noexcept override { return #name; } \
  }

// molgraph
MHG_DEFINE_ERROR(UnknownElement);

// chem_io
MHG_DEFINE_ERROR(SyntaxError);
MHG_DEFINE_ERROR(AromaticNotSupported);
MHG_DEFINE_ERROR(ValenceError);
MHG_DEFINE_ERROR(UnclosedRing);
MHG_DEFINE_ERROR(UnsupportedFeature);
MHG_DEFINE_ERROR(IoError);

// hypergraph
MHG_DEFINE_ERROR(EmptyBondSet);
MHG_DEFINE_ERROR(NotTwoRegular);
MHG_DEFINE_ERROR(CardinalityMismatch);

// treedecomp
MHG_DEFINE_ERROR(IrreparableDecomposition);

// grammar
MHG_DEFINE_ERROR(LabelMismatch);
MHG_DEFINE_ERROR(OccurrenceNotFound);
MHG_DEFINE_ERROR(InvalidSequence);
MHG_DEFINE_ERROR(BudgetExceeded);

// inference
MHG_DEFINE_ERROR(NotInLanguage);

// optimize
MHG_DEFINE_ERROR(UnknownRule);
MHG_DEFINE_ERROR(WidthMismatch);
MHG_DEFINE_ERROR(UnfittedStandardizer);
MHG_DEFINE_ERROR(NotPositiveDefinite);

// cli
MHG_DEFINE_ERROR(ConfigError);

#undef MHG_DEFINE_ERROR

}  // namespace mhg

#endif  // MHG_ERRORS_HPP
