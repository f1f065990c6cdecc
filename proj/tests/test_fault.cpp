#include "hvm/fault.hpp"
#include "hvm/simgen.hpp"
#include "support.hpp"

using namespace hvm;
using hvm::test::column_matrix;
using hvm::test::specs_of;

namespace {

HybridDataset small() {
  return validate_dataset(specs_of("cb"), column_matrix({{2.0, -1.0, 0.5}, {1, 0, 1}}));
}

}  // namespace

TEST(Fault, ZeroDirectionIsIdentity) {
  const auto data = small();
  const auto out = inject_faults(data, FaultSpec::none(3, 2));
  EXPECT_TRUE((out.values().array() == data.values().array()).all());
}

TEST(Fault, BinaryCellFlipsDown) {
  auto spec = FaultSpec::none(3, 2);
  spec.direction(0, 1) = 1;
  spec.magnitude(0, 1) = -1;
  EXPECT_EQ(inject_faults(small(), spec)(0, 1), 0.0);
}

TEST(Fault, ContinuousCellAdds) {
  auto spec = FaultSpec::none(3, 2);
  spec.direction(0, 0) = 1;
  spec.magnitude(0, 0) = 0.5;
  const auto out = inject_faults(small(), spec);
  EXPECT_EQ(out(0, 0), 2.5);
  EXPECT_EQ(out(1, 0), -1.0);
}

TEST(Fault, MagnitudeIgnoredWhereInactive) {
  auto spec = FaultSpec::none(3, 2);
  spec.magnitude.setConstant(7.0);
  const auto data = small();
  EXPECT_TRUE((inject_faults(data, spec).values().array() == data.values().array()).all());
}

TEST(Fault, BinaryAmplitudeViolationNamesCell) {
  auto spec = FaultSpec::none(3, 2);
  spec.direction(1, 1) = 1;
  spec.magnitude(1, 1) = 2.0;
  try {
    inject_faults(small(), spec);
    FAIL() << "expected an error";
  } catch (const HvmError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BinaryAmplitudeViolation);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column 1"), std::string::npos) << msg;
  }
}

TEST(Fault, ShapeMismatch) {
  EXPECT_HVM_ERROR(inject_faults(small(), FaultSpec::none(2, 2)), ErrorKind::ShapeMismatch);
}

TEST(Fault, DirectionMustBeZeroOrOne) {
  auto spec = FaultSpec::none(3, 2);
  spec.direction(0, 0) = 0.5;
  EXPECT_HVM_ERROR(inject_faults(small(), spec), ErrorKind::MalformedInput);
}

TEST(Fault, FlipIsAnInvolution) {
  const auto data = generate_block(preset_config("exp2"), Phase::Normal, 200, 4);
  FaultSpec spec{Eigen::MatrixXd::Zero(200, 10), flip_magnitudes(data)};
  for (const auto j : data.binary_indices()) spec.direction.col(static_cast<Eigen::Index>(j)).setOnes();
  const auto once = inject_faults(data, spec);
  for (const auto j : data.binary_indices()) {
    for (std::size_t i = 0; i < data.rows(); ++i) EXPECT_EQ(once(i, j), 1.0 - data(i, j));
  }
  FaultSpec back{spec.direction, flip_magnitudes(once)};
  const auto twice = inject_faults(once, back);
  EXPECT_TRUE((twice.values().array() == data.values().array()).all());
}

TEST(Fault, ColumnBiasMatchesBroadcastAddition) {
  const auto data = generate_block(preset_config("exp1"), Phase::Normal, 100, 6);
  FaultSpec spec = FaultSpec::none(100, 10);
  spec.direction.col(2).setOnes();
  spec.magnitude.col(2).setConstant(1.75);
  const auto out = inject_faults(data, spec);
  Eigen::MatrixXd expected = data.values();
  expected.col(2).array() += 1.75;
  EXPECT_TRUE((out.values().array() == expected.array()).all());
}

TEST(FaultTriples, ParsesIndicesNamesAndComments) {
  const auto data = small();
  const auto spec = parse_fault_triples("row,column,magnitude\n# bias\n0,v1,0.5\n2,1,-1\n", data);
  EXPECT_EQ(spec.direction(0, 0), 1.0);
  EXPECT_EQ(spec.magnitude(0, 0), 0.5);
  EXPECT_EQ(spec.direction(2, 1), 1.0);
  EXPECT_EQ(spec.magnitude(2, 1), -1.0);
  EXPECT_EQ(spec.direction.sum(), 2.0);
}

TEST(FaultTriples, EmptyListingIsNoFault) {
  EXPECT_EQ(parse_fault_triples("", small()).direction.sum(), 0.0);
  EXPECT_EQ(parse_fault_triples("row,column,magnitude\n", small()).direction.sum(), 0.0);
}

TEST(FaultTriples, BadLinesRejected) {
  const auto data = small();
  EXPECT_HVM_ERROR(parse_fault_triples("5,0,1\n", data), ErrorKind::MalformedInput);
  EXPECT_HVM_ERROR(parse_fault_triples("0,nope,1\n", data), ErrorKind::MalformedInput);
  EXPECT_HVM_ERROR(parse_fault_triples("0,0\n", data), ErrorKind::MalformedInput);
  EXPECT_HVM_ERROR(parse_fault_triples("0,0,x\n", data), ErrorKind::MalformedInput);
}
