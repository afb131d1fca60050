#pragma once

#include <stdexcept>
#include <string>

namespace sparselab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define SPARSELAB_ERROR(Name)                                  \
    struct Name : Error {                                      \
        explicit Name(const std::string& what = #Name)         \
            : Error(what) {}                                   \
    }

SPARSELAB_ERROR(GridTooCoarse);
SPARSELAB_ERROR(GridMismatch);
SPARSELAB_ERROR(EmptyCollection);
SPARSELAB_ERROR(NotLacunary);
SPARSELAB_ERROR(MissingPacket);
SPARSELAB_ERROR(CapacityExceeded);
SPARSELAB_ERROR(EmptyFamily);
SPARSELAB_ERROR(DegenerateEta);
SPARSELAB_ERROR(PreconditionSizeExceeded);
SPARSELAB_ERROR(NonterminatingRecursion);
SPARSELAB_ERROR(BadThetaSum);
SPARSELAB_ERROR(RankTooLarge);
SPARSELAB_ERROR(WeightVanishes);
SPARSELAB_ERROR(ExponentClash);
SPARSELAB_ERROR(UnboundedSymbol);
SPARSELAB_ERROR(IOFailure);
SPARSELAB_ERROR(BadConfig);

#undef SPARSELAB_ERROR

} // namespace sparselab
