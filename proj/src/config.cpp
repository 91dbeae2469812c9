#include "rotwave/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rotwave {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

void parse_into(const std::string& path, std::map<std::string, std::string>& out,
                int depth) {
  if (depth > 8) throw std::runtime_error("config: include depth exceeded");
  std::ifstream is(path);
  if (!is) throw std::runtime_error("config: cannot open " + path);
  std::string line;
  while (std::getline(is, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("include ", 0) == 0) {
      std::filesystem::path inc = trim(line.substr(8));
      if (inc.is_relative()) inc = std::filesystem::path(path).parent_path() / inc;
      parse_into(inc.string(), out, depth + 1);
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected key=value, got: " + line);
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    throw std::runtime_error("config: bad number for " + key + ": " + v);
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    throw std::runtime_error("config: bad integer for " + key + ": " + v);
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw std::runtime_error("config: bad boolean for " + key + ": " + v);
}

template <typename T, typename F>
std::vector<T> to_list(const std::string& key, const std::string& v, F conv) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(conv(key, item));
  }
  if (out.empty()) throw std::runtime_error("config: empty list for " + key);
  return out;
}

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::map<std::string, std::string> out;
  parse_into(path, out, 0);
  return out;
}

void RunConfig::apply(const std::map<std::string, std::string>& kv) {
  for (const auto& [key, val] : kv) {
    if (key == "n") sim.n = static_cast<int>(to_long(key, val));
    else if (key == "L") sim.box_length = to_double(key, val);
    else if (key == "dt") sim.dt = to_double(key, val);
    else if (key == "t_end") sim.t_end = to_double(key, val);
    else if (key == "rotation") sim.rotation_on = to_bool(key, val);
    else if (key == "dealias") sim.dealias_on = to_bool(key, val);
    else if (key == "nonlinear") sim.nonlinear_on = to_bool(key, val);
    else if (key == "formulation") {
      if (val == "velocity") sim.formulation = Formulation::Velocity;
      else if (val == "dispersive") sim.formulation = Formulation::Dispersive;
      else throw std::runtime_error("config: formulation must be velocity|dispersive");
    } else if (key == "stride") sim.stride = static_cast<int>(to_long(key, val));
    else if (key == "snapshot_stride")
      sim.snapshot_stride = static_cast<int>(to_long(key, val));
    else if (key == "seed") sim.seed = static_cast<uint64_t>(to_long(key, val));
    else if (key == "epsilon") sim.amplitude = to_double(key, val);
    else if (key == "k0") sim.k0 = to_double(key, val);
    else if (key == "width") sim.width = to_double(key, val);
    else if (key == "sobolev_s") sim.sobolev_s = to_double(key, val);
    else if (key == "out") out_dir = val;
    else if (key == "suite") suite = val;
    else if (key == "eps_list") eps_list = to_list<double>(key, val, to_double);
    else if (key == "seeds")
      seeds = to_list<uint64_t>(key, val, [](const std::string& k, const std::string& v2) {
        return static_cast<uint64_t>(to_long(k, v2));
      });
    else if (key == "threshold_factor") threshold_factor = to_double(key, val);
    else if (key == "decay_times") decay_times = to_list<double>(key, val, to_double);
    else if (key == "decay_band_k") decay_band_k = static_cast<int>(to_long(key, val));
    else if (key == "decay_band_p") decay_band_p = static_cast<int>(to_long(key, val));
    else if (key == "decay_band_q") decay_band_q = static_cast<int>(to_long(key, val));
    else if (key == "quad_n_rho") quad_n_rho = static_cast<int>(to_long(key, val));
    else if (key == "quad_n_lam") quad_n_lam = static_cast<int>(to_long(key, val));
    else throw std::runtime_error("config: unknown key: " + key);
  }
  sim.out_dir = out_dir;
  if (sim.dt <= 0.0) throw std::runtime_error("config: dt must be positive");
  if (sim.t_end < 0.0) throw std::runtime_error("config: t_end must be >= 0");
}

std::string RunConfig::echo() const {
  std::ostringstream os;
  os << "n = " << sim.n << "\n";
  os << "L = " << CsvWriter::num(sim.box_length) << "\n";
  os << "dt = " << CsvWriter::num(sim.dt) << "\n";
  os << "t_end = " << CsvWriter::num(sim.t_end) << "\n";
  os << "rotation = " << (sim.rotation_on ? "on" : "off") << "\n";
  os << "dealias = " << (sim.dealias_on ? "on" : "off") << "\n";
  os << "nonlinear = " << (sim.nonlinear_on ? "on" : "off") << "\n";
  os << "formulation = "
     << (sim.formulation == Formulation::Velocity ? "velocity" : "dispersive") << "\n";
  os << "stride = " << sim.stride << "\n";
  os << "snapshot_stride = " << sim.snapshot_stride << "\n";
  os << "seed = " << sim.seed << "\n";
  os << "epsilon = " << CsvWriter::num(sim.amplitude) << "\n";
  os << "k0 = " << CsvWriter::num(sim.k0) << "\n";
  os << "width = " << CsvWriter::num(sim.width) << "\n";
  os << "sobolev_s = " << CsvWriter::num(sim.sobolev_s) << "\n";
  os << "out = " << out_dir << "\n";
  os << "suite = " << suite << "\n";
  os << "eps_list = ";
  for (std::size_t i = 0; i < eps_list.size(); ++i)
    os << (i ? "," : "") << CsvWriter::num(eps_list[i]);
  os << "\nseeds = ";
  for (std::size_t i = 0; i < seeds.size(); ++i) os << (i ? "," : "") << seeds[i];
  os << "\nthreshold_factor = " << CsvWriter::num(threshold_factor) << "\n";
  os << "decay_band_k = " << decay_band_k << "\n";
  os << "decay_band_p = " << decay_band_p << "\n";
  os << "decay_band_q = " << decay_band_q << "\n";
  os << "quad_n_rho = " << quad_n_rho << "\n";
  os << "quad_n_lam = " << quad_n_lam << "\n";
  if (!decay_times.empty()) {
    os << "decay_times = ";
    for (std::size_t i = 0; i < decay_times.size(); ++i)
      os << (i ? "," : "") << CsvWriter::num(decay_times[i]);
    os << "\n";
  }
  return os.str();
}

struct CsvWriter::Impl {
  std::ofstream os;
};

CsvWriter::CsvWriter(const std::string& path) : impl_(new Impl) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  impl_->os.open(path, std::ios::binary);  // binary: LF endings everywhere
  if (!impl_->os) {
    delete impl_;
    throw std::runtime_error("csv: cannot open " + path);
  }
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::header(const std::vector<std::string>& cols) { row(cols); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    impl_->os << (i ? "," : "") << cells[i];
  impl_->os << "\n";
}

std::string CsvWriter::num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace rotwave
