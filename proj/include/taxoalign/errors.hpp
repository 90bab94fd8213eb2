#pragma once

#include <stdexcept>
#include <string>

namespace taxoalign {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// tree parsing
struct EmptyInput : Error { using Error::Error; };
struct OrphanLine : Error { using Error::Error; };
struct AmbiguousIndent : Error { using Error::Error; };

// outline extraction
struct NoHeadingsSurvive : Error { using Error::Error; };

// providers
struct ProviderUnavailable : Error { using Error::Error; };
struct EmptyText : Error { using Error::Error; };

// metrics
struct DegenerateTree : Error { using Error::Error; };
struct EmptyCorpus : Error { using Error::Error; };
struct NonPositiveInnerSum : Error { using Error::Error; };
struct NoGoldEntities : Error { using Error::Error; };
struct UnparseableJudgeResponse : Error { using Error::Error; };

// gateway
struct GatewayError : Error { using Error::Error; };
struct MissingFixture : Error { using Error::Error; };

// pipeline
struct UnparseableSliceList : Error { using Error::Error; };
struct UnparseableTree : Error { using Error::Error; };

// corpus
struct NoInstancesFound : Error { using Error::Error; };

} // namespace taxoalign
