#pragma once

#include "syre/experiments.hpp"

namespace syre::experiments {

ExperimentDef make_benchmark();
ExperimentDef make_ridge();
ExperimentDef make_reparam();
ExperimentDef make_entrapment();
ExperimentDef make_teacher_student_rank();
ExperimentDef make_theorem3();
ExperimentDef make_theorem4();
ExperimentDef make_theorem5();
ExperimentDef make_prop1_prop2();
ExperimentDef make_ntk_rank();

}  // namespace syre::experiments
