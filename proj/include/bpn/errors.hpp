#ifndef BPN_ERRORS_HPP
#define BPN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bpn {

// Base class for all library errors. Every throw carries a short code
// (stable, machine-checkable) and a human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define BPN_DEFINE_ERROR(Name)                          \
  class Name : public Error {                           \
   public:                                              \
    explicit Name(const std::string& msg)               \
        : Error(#Name, msg) {}                          \
  }

// factors
BPN_DEFINE_ERROR(LengthMismatch);
BPN_DEFINE_ERROR(NegativeEntry);
BPN_DEFINE_ERROR(DuplicateVariable);
BPN_DEFINE_ERROR(DomainMismatch);
BPN_DEFINE_ERROR(UnknownVariable);
BPN_DEFINE_ERROR(ValueOutOfRange);
BPN_DEFINE_ERROR(RowNotNormalized);
BPN_DEFINE_ERROR(ZeroMass);
BPN_DEFINE_ERROR(StateSpaceTooLarge);

// nets
BPN_DEFINE_ERROR(ArityViolation);
BPN_DEFINE_ERROR(LabelMismatch);
BPN_DEFINE_ERROR(NotAtomic);
BPN_DEFINE_ERROR(NotMllAtomic);
BPN_DEFINE_ERROR(InternalInconsistency);
BPN_DEFINE_ERROR(NoSuchConclusion);
BPN_DEFINE_ERROR(NotInternal);
BPN_DEFINE_ERROR(StaleRedex);
BPN_DEFINE_ERROR(StepLimitExceeded);

// bayes / factorization
BPN_DEFINE_ERROR(SchemaError);
BPN_DEFINE_ERROR(CycleInDag);
BPN_DEFINE_ERROR(UnknownParent);
BPN_DEFINE_ERROR(NotBpn);
BPN_DEFINE_ERROR(ValuationMismatch);
BPN_DEFINE_ERROR(MissingValuation);
BPN_DEFINE_ERROR(NotFactorized);
BPN_DEFINE_ERROR(NotATree);
BPN_DEFINE_ERROR(IntraComponentCut);
BPN_DEFINE_ERROR(AtomNotInModule);
BPN_DEFINE_ERROR(OrderIncomplete);
BPN_DEFINE_ERROR(NotNormal);
BPN_DEFINE_ERROR(NonEmptyConclusion);
BPN_DEFINE_ERROR(UnknownWiring);
BPN_DEFINE_ERROR(UnknownAtom);
BPN_DEFINE_ERROR(JointreeViolation);
BPN_DEFINE_ERROR(QueryInOrder);
BPN_DEFINE_ERROR(QueryNotInRoot);
BPN_DEFINE_ERROR(InvalidTree);
BPN_DEFINE_ERROR(IoError);
BPN_DEFINE_ERROR(ParseError);

#undef BPN_DEFINE_ERROR

}  // namespace bpn

#endif  // BPN_ERRORS_HPP
