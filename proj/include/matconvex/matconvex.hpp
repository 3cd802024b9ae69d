#pragma once

#include "matconvex/double_double.hpp"
#include "matconvex/interval.hpp"
#include "matconvex/function_model.hpp"
#include "matconvex/divided_difference.hpp"
#include "matconvex/linalg.hpp"
#include "matconvex/sampler.hpp"
#include "matconvex/criterion_matrices.hpp"
#include "matconvex/classify.hpp"
#include "matconvex/gaps.hpp"
#include "matconvex/oracle.hpp"
#include "matconvex/transforms.hpp"
#include "matconvex/report.hpp"
#include "matconvex/verify.hpp"
