#include "ride/intrinsic/rewards.hpp"

namespace ride::intrinsic {

Method method_from_string(const std::string& s) {
  if (s == "ride") return Method::ride;
  if (s == "icm") return Method::icm;
  if (s == "rnd") return Method::rnd;
  if (s == "count") return Method::count;
  if (s == "only-episodic" || s == "only_episodic") return Method::only_episodic;
  if (s == "no-episodic" || s == "no_episodic") return Method::no_episodic;
  if (s == "vanilla" || s == "impala") return Method::vanilla;
  throw ConfigError("unknown method '" + s + "'");
}

const char* to_string(Method m) {
  switch (m) {
    case Method::ride: return "ride";
    case Method::icm: return "icm";
    case Method::rnd: return "rnd";
    case Method::count: return "count";
    case Method::only_episodic: return "only-episodic";
    case Method::no_episodic: return "no-episodic";
    case Method::vanilla: return "vanilla";
  }
  return "?";
}

double rnd_reward(const RndPair& pair, const int8_t* obs) {
  const int d = pair.net.out_dim;
  std::vector<float> t_out(d), p_out(d);
  RndNet::Cache cache;
  pair.net.forward(pair.target, obs, 1, cache, t_out.data());
  pair.net.forward(pair.predictor, obs, 1, cache, p_out.data());
  double s = 0;
  for (int i = 0; i < d; i++) {
    const double diff = static_cast<double>(p_out[i]) - static_cast<double>(t_out[i]);
    s += diff * diff;
  }
  return s;
}

}  // namespace ride::intrinsic
