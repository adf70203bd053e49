#ifndef VACRAD_VACRAD_HPP
#define VACRAD_VACRAD_HPP

#include "vacrad/errors.hpp"
#include "vacrad/profiles.hpp"
#include "vacrad/special.hpp"
#include "vacrad/ode.hpp"
#include "vacrad/quadrature.hpp"
#include "vacrad/jost.hpp"
#include "vacrad/exact_sech.hpp"
#include "vacrad/approximations.hpp"
#include "vacrad/quantum.hpp"
#include "vacrad/concurrency.hpp"
#include "vacrad/multimode.hpp"
#include "vacrad/io.hpp"
#include "vacrad/scenario.hpp"

#endif // VACRAD_VACRAD_HPP
