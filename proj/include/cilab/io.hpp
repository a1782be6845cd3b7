#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cilab/field.hpp"
#include "cilab/gas.hpp"

namespace cilab {

/// DBV1: text header
///   dbv1 / n <dim> / origin <floats> / spacing <floats> / counts <ints> /
///   [time-axis <floats>] / [singular <position> <resolve radius>]... / layout packed-upper|scalar
/// followed by little-endian float64 cell records in row-major cell order
/// (one block per instant when a time axis is present). The PSD flag is not
/// stored; callers mark fields after reading. `n` is the matrix
/// dimension (1 for scalars); the grid dimension is the length of `counts`.
void write_dbv1(std::ostream& os, const TensorField& f);
void write_dbv1(std::ostream& os, const ScalarField& f);
void write_dbv1(std::ostream& os, const DefectField& f);

TensorField read_dbv1_tensor(std::istream& is);
ScalarField read_dbv1_scalar(std::istream& is);
DefectField read_dbv1_defect(std::istream& is);

/// FLW1: text header
///   flw1 / d <dim> / times <floats> / origin / spacing / counts / fields rho u p e
/// then one block per instant: rho[cells], u[cells x d], p[cells], e[cells].
void write_flw1(std::ostream& os, const FlowField& w);
FlowField read_flw1(std::istream& is);

/// Path helpers; throw Format on I/O failure.
void save(const std::string& path, const TensorField& f);
void save(const std::string& path, const ScalarField& f);
void save(const std::string& path, const DefectField& f);
void save(const std::string& path, const FlowField& w);
std::string read_file(const std::string& path);
/// "dbv1" or "flw1", from the first line.
std::string sniff_format(const std::string& bytes);

}  // namespace cilab
