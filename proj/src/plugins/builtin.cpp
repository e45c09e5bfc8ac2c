#include "mha/plugins/adm.hpp"
#include "mha/plugins/basic.hpp"
#include "mha/plugins/combinechannels.hpp"
#include "mha/plugins/dc_simple.hpp"
#include "mha/plugins/fftfilterbank.hpp"
#include "mha/plugins/levelmeter.hpp"
#include "mha/plugins/mhachain.hpp"
#include "mha/plugins/overlapadd.hpp"
#include "mha/plugins/siggen.hpp"
#include "mha/plugins/transducers.hpp"

namespace mha {

void register_builtin_plugins(PluginRegistry& r) {
  using namespace plugins;
  register_plugin<Transducers>(r, "transducers");
  register_plugin<OverlapAdd>(r, "overlapadd");
  register_plugin<MhaChain>(r, "mhachain");
  register_plugin<FftFilterbank>(r, "fftfilterbank");
  register_plugin<DcSimple>(r, "dc_simple");
  register_plugin<CombineChannels>(r, "combinechannels");
  register_plugin<Adm>(r, "adm");
  register_plugin<Attenuate20>(r, "attenuate20");
  register_plugin<Gain>(r, "gain");
  register_plugin<Identity>(r, "identity");
  register_plugin<SigGen>(r, "siggen");
  register_plugin<LevelMeter>(r, "levelmeter");
}

PluginRegistry& default_registry() {
  static PluginRegistry registry = [] {
    PluginRegistry r;
    register_builtin_plugins(r);
    return r;
  }();
  return registry;
}

}  // namespace mha
