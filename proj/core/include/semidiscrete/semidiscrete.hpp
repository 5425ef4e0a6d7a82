#pragma once

#include "semidiscrete/conservation.hpp"
#include "semidiscrete/distributions.hpp"
#include "semidiscrete/errors.hpp"
#include "semidiscrete/format.hpp"
#include "semidiscrete/poisson.hpp"
#include "semidiscrete/time_scale.hpp"
#include "semidiscrete/transport.hpp"
