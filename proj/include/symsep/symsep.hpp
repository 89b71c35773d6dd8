#pragma once

#include "symsep/config.hpp"
#include "symsep/errors.hpp"
#include "symsep/linalg.hpp"
#include "symsep/random.hpp"
#include "symsep/dicke.hpp"
#include "symsep/ptranspose.hpp"
#include "symsep/cones.hpp"
#include "symsep/separability.hpp"
#include "symsep/embedding.hpp"
#include "symsep/io.hpp"
