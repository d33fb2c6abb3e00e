#pragma once

#include "qcurve/counting.hpp"
#include "qcurve/curve.hpp"
#include "qcurve/decompose.hpp"
#include "qcurve/errors.hpp"
#include "qcurve/family.hpp"
#include "qcurve/field.hpp"
#include "qcurve/integer.hpp"
#include "qcurve/models.hpp"
#include "qcurve/multiexp.hpp"
#include "qcurve/records.hpp"
