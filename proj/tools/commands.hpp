#pragma once

#include <exception>
#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"

namespace meridian::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitInvalidInput = 2,
  kExitNumerical = 3,
};

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e);

/// 9 significant digits; integral values keep a ".0" and -0 prints as 0.0.
std::string fmt9(double x);

inline constexpr const char* kInvariantsHeader =
    "u,v,E,F,G,k,varkappa,K,H2,normH,epsilon,gamma1,gamma2,nu1,nu2,lambda,mu,beta1,beta2,"
    "pointclass";

int cmd_build(const std::string& config_path, const std::string& out_path, std::ostream& log);

int cmd_invariants(const std::string& config_path, std::optional<Grid> grid,
                   const std::string& out_path, std::ostream& log, Exec exec = Exec::parallel);

struct VerifyOptions {
  FamilySpec spec;
  double tol = 1e-6;
  Grid grid;
  std::string jsonl_path;  ///< optional file the JSON-lines are appended to
};

int cmd_verify(const VerifyOptions& opts, std::ostream& out);

int cmd_export(const std::string& config_path, const std::string& format,
               std::optional<Grid> grid, const std::string& out_path, std::ostream& log);

/// Parses argv and dispatches; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace meridian::cli
