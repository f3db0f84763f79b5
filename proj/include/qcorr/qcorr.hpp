#pragma once

#include "qcorr/error.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/report_io.hpp"
#include "qcorr/spin_models.hpp"
#include "qcorr/sweep.hpp"
