#pragma once

#include "primeset/bigfloat.hpp"
#include "primeset/codebook.hpp"
#include "primeset/error.hpp"
#include "primeset/exact_code.hpp"
#include "primeset/multiset.hpp"
#include "primeset/multiset_io.hpp"
#include "primeset/pair_code.hpp"
#include "primeset/prime_sieve.hpp"
#include "primeset/real_code.hpp"
#include "primeset/wl.hpp"
