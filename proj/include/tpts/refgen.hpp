#pragma once

#include "tpts/types.hpp"

namespace tpts {

// Balanced three-phase reference currents, phase A peaking at theta = 0:
//   (m*i_dc*cos(theta), m*i_dc*cos(theta - 2pi/3), m*i_dc*cos(theta + 2pi/3)).
PhaseTriple reference_currents(double theta, double m, double i_dc);

// Sorts the absolute amplitudes descending. Ties keep phase order A, B, C.
AbsOrdering classify_abs(const PhaseTriple& refs);

// Sector from the current space-vector angle; sector 1 spans theta in [-30, +30) deg,
// half a = [-30, 0), half b = [0, +30). Boundaries belong to the right interval.
SectorLocation locate_sector(const PhaseTriple& refs);

// Phase roles implied by the sector geometry alone.
Phase extremum_phase(int sector);                // phase holding the signed extremum
int extremum_sign(int sector);                   // +1 odd sectors, -1 even sectors
Phase min_abs_phase(int sector, Half half);      // smallest |ref| of the two non-extremal phases
Phase mid_abs_phase(int sector, Half half);

// AbsOrdering with identities taken from the location tables and values from |refs|.
// Coincides with classify_abs everywhere except exactly on subsector boundaries,
// where only labels (not on-times) can differ.
AbsOrdering ordering_for_location(const PhaseTriple& refs, const SectorLocation& loc);

}  // namespace tpts
