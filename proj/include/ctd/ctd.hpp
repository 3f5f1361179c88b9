#ifndef CTD_CTD_HPP
#define CTD_CTD_HPP

#include "ctd/axioms.hpp"
#include "ctd/closure.hpp"
#include "ctd/core.hpp"
#include "ctd/dsl.hpp"
#include "ctd/json_io.hpp"
#include "ctd/lemmas.hpp"
#include "ctd/models.hpp"
#include "ctd/search.hpp"

#endif  // CTD_CTD_HPP
