// Command-line front end; all work happens behind the C API of the shared library.
#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "mordae/mordae.h"

namespace {

struct Args {
  std::string config, bundle, rom, gain, out, mode;
  long long seed = 0;
};

void add_flags(CLI::App* sub, Args& a, bool gain, bool rom) {
  sub->add_option("--config", a.config, "JSON run configuration");
  sub->add_option("--bundle", a.bundle, "input bundle directory");
  if (rom) sub->add_option("--rom", a.rom, "reduced-model bundle directory");
  if (gain) sub->add_option("--gain", a.gain, "gain bundle directory");
  sub->add_option("--out", a.out, "output directory");
  sub->add_option("--mode", a.mode, "petrov_galerkin | galerkin (overrides the config)");
  sub->add_option("--seed", a.seed, "seed override (overrides the config)");
}

const char* opt_str(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpolatory model reduction and LQR design for index-2 DAE systems"};
  app.require_subcommand(1);

  Args a;
  struct Sub {
    const char* name;
    const char* help;
    bool gain, rom;
  };
  const Sub subs[] = {
      {"generate", "build a test system and write its matrix bundle", false, false},
      {"reduce", "interpolatory reduction: reduced-model bundle + interpolation report", false, false},
      {"sigma", "frequency sweep CSV for a system or reduced-model bundle", false, false},
      {"poles", "finite-pole report JSON for a system or reduced-model bundle", false, false},
      {"lqr", "Riccati design on a reduced model; gain bundle (+ gain fields with --bundle)", false, true},
      {"simulate", "implicit-Euler closed loop; trajectory CSV (--gain for feedback)", true, false},
      {"verify", "interpolation residuals of a reduced model against its system", false, true},
  };
  for (const Sub& s : subs) add_flags(app.add_subcommand(s.name, s.help), a, s.gain, s.rom);

  CLI11_PARSE(app, argc, argv);

  CLI::App* sub = app.get_subcommands().front();
  bool has_seed = false;
  for (const CLI::Option* o : sub->get_options())
    if (o->get_name() == "--seed" && o->count() > 0) has_seed = true;

  mordae_cli_options opt{};
  opt.config_path = opt_str(a.config);
  opt.bundle_dir = opt_str(a.bundle);
  opt.rom_dir = opt_str(a.rom);
  opt.gain_dir = opt_str(a.gain);
  opt.out_dir = opt_str(a.out);
  opt.mode = opt_str(a.mode);
  opt.seed = a.seed;
  opt.has_seed = has_seed ? 1 : 0;

  const int rc = mordae_cli_run(sub->get_name().c_str(), &opt);
  if (rc != MORDAE_OK) {
    std::fprintf(stderr, "error %d: %s\n", rc, mordae_last_error_message());
    return rc;
  }
  return 0;
}
