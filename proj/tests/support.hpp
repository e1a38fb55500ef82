#pragma once

#include <array>
#include <cstdio>
#include <string>

#include <sys/wait.h>

#include "orthocoord/orthocoord.hpp"

namespace support {

using orthocoord::Matrix;
using orthocoord::Vector;

inline std::array<Vector, 4> random_quadruple(int n, orthocoord::Rng& rng) {
  return {orthocoord::standard_normal_vector(n, rng), orthocoord::standard_normal_vector(n, rng),
          orthocoord::standard_normal_vector(n, rng), orthocoord::standard_normal_vector(n, rng)};
}

struct Run {
  int status = -1;
  std::string out;
};

// Runs the CLI with `args`, capturing stdout; stderr is discarded.
inline Run run_cli(const std::string& args) {
  const std::string cmd = std::string(ORTHOCOORD_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

}  // namespace support
