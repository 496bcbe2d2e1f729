#pragma once

#include "cyclicflag/bits.hpp"
#include "cyclicflag/pauli.hpp"
#include "cyclicflag/classical_code.hpp"
#include "cyclicflag/css_code.hpp"
#include "cyclicflag/consecutive.hpp"
#include "cyclicflag/flag_circuit.hpp"
#include "cyclicflag/protocols.hpp"
#include "cyclicflag/parallel.hpp"
#include "cyclicflag/ft_verifier.hpp"
#include "cyclicflag/code_file.hpp"
