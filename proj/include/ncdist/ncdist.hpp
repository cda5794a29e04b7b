#ifndef NCDIST_NCDIST_HPP
#define NCDIST_NCDIST_HPP

#include "ncdist/tridiagonal.hpp"
#include "ncdist/staircase.hpp"
#include "ncdist/graph.hpp"
#include "ncdist/munu.hpp"
#include "ncdist/path_solver.hpp"
#include "ncdist/oracle.hpp"

#endif
