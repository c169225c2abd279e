#pragma once

#include <iosfwd>
#include <string>

#include "qembed/hamiltonian.hpp"

namespace qembed {

/**
 * Extended FCIDUMP text format.
 *
 *   &FCI NORB=n,NELEC=m,MS2=s,COMPLEX={0|1},GAMMA={0|1} &END
 *   re [im] i j k l
 *
 * Indices are 1-based, chemist order (ij|kl). "i j 0 0" is h_ij and
 * "0 0 0 0" is the constant. The im column is present iff COMPLEX=1.
 * Entries are expanded over the 4-fold (8-fold when GAMMA=1) symmetry
 * orbit; conflicting duplicates are rejected.
 */
ActiveSpaceHamiltonian read_fcidump(std::istream& in);
ActiveSpaceHamiltonian load_fcidump(const std::string& path);

/// Writes one entry per symmetry orbit (non-zero entries only), values in
/// round-trip precision.
void write_fcidump(std::ostream& out, const ActiveSpaceHamiltonian& H);
void save_fcidump(const std::string& path, const ActiveSpaceHamiltonian& H);

}  // namespace qembed
