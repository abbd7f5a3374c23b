#pragma once

#include <stdexcept>
#include <string>

namespace biaseval {

// Every failure raised by the library derives from Error. The three
// intermediate categories map onto the CLI exit codes.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

class DataError : public Error
{
public:
  using Error::Error;
};

class NumericalError : public Error
{
public:
  using Error::Error;
};

#define BIASEVAL_ERROR(Name, Base)                                             \
  class Name : public Base                                                     \
  {                                                                            \
  public:                                                                      \
    using Base::Base;                                                          \
  }

// dataset ingestion
BIASEVAL_ERROR(MalformedDataset, DataError);
BIASEVAL_ERROR(DegeneratePair, DataError);

// score files
BIASEVAL_ERROR(SchemaError, DataError);
BIASEVAL_ERROR(MixedSetError, DataError);
BIASEVAL_ERROR(DuplicatePairError, DataError);
BIASEVAL_ERROR(EmptyJoin, DataError);
BIASEVAL_ERROR(UniverseMismatch, DataError);
BIASEVAL_ERROR(KeyMismatch, DataError);
BIASEVAL_ERROR(LengthMismatch, DataError);

// numerics
BIASEVAL_ERROR(EmptySet, NumericalError);
BIASEVAL_ERROR(TooFewSamples, NumericalError);
BIASEVAL_ERROR(DegenerateDistribution, NumericalError);
BIASEVAL_ERROR(SampleSizeError, NumericalError);
BIASEVAL_ERROR(DegenerateSample, NumericalError);
BIASEVAL_ERROR(EmptyGroup, NumericalError);

#undef BIASEVAL_ERROR

} // namespace biaseval
