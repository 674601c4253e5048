#ifndef PCST_PCST_HPP
#define PCST_PCST_HPP

#include "pcst/common.hpp"
#include "pcst/instance.hpp"
#include "pcst/io.hpp"
#include "pcst/generate.hpp"
#include "pcst/solution.hpp"
#include "pcst/maxsum.hpp"
#include "pcst/rooting.hpp"
#include "pcst/postprocess.hpp"
#include "pcst/oracle.hpp"
#include "pcst/verify.hpp"
#include "pcst/bench.hpp"

#endif
