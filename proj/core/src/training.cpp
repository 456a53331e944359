#include "cadweno/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace cadweno {

namespace {

// The sampling grid on [-1, 1]: x_j = (j - kGridCenter) * dx, j = 0..kGridLast.
constexpr int kGridCenter = 100;
constexpr int kGridLast = 200;

double grid_x(int j) { return (j - kGridCenter) * kTrainingSpacing; }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct SmoothFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

// Forward stencil at labelled index i uses x_{i-2..i+1}, label f'(x_i).
// The mirrored stencil (v_{i+1}, v_i, v_{i-1}, v_{i-2}) is the same data seen
// in the reversed coordinate, labelled -f'(x_{i-1}).
Sample smooth_sample(const SmoothFunction& f, int i, bool mirrored, FunctionFamily family) {
  Sample s;
  s.kind = SampleKind::kSmooth;
  s.family = family;
  if (!mirrored) {
    for (int k = 0; k < 4; ++k) s.stencil.v[k] = f.value(grid_x(i - 2 + k));
    s.label = smooth_label(f.derivative, grid_x(i));
  } else {
    for (int k = 0; k < 4; ++k) s.stencil.v[k] = f.value(grid_x(i + 1 - k));
    s.label = -smooth_label(f.derivative, grid_x(i - 1));
  }
  return s;
}

void append_smooth(std::vector<Sample>& out, std::mt19937_64& rng, std::size_t count, std::size_t per_function,
                   FunctionFamily family) {
  std::uniform_int_distribution<int> position(2, kGridLast - 1);
  std::bernoulli_distribution mirror(0.5);
  std::size_t produced = 0;
  std::size_t function_index = 0;
  while (produced < count) {
    SmoothFunction f;
    if (family == FunctionFamily::kCubic) {
      std::array<double, 4> a{};
      for (double& coeff : a) coeff = uniform(rng, -1.0, 1.0);
      f.value = [a](double x) { return a[0] + x * (a[1] + x * (a[2] + x * a[3])); };
      f.derivative = [a](double x) { return a[1] + x * (2.0 * a[2] + x * 3.0 * a[3]); };
    } else {
      const double b = uniform(rng, 2.0, 20.0);
      if (function_index % 2 == 0) {
        f.value = [b](double x) { return std::tanh(b * x); };
        f.derivative = [b](double x) {
          const double sech = 1.0 / std::cosh(b * x);
          return b * sech * sech;
        };
      } else {
        f.value = [b](double x) { return std::sin(b * std::numbers::pi * x); };
        f.derivative = [b](double x) { return b * std::numbers::pi * std::cos(b * std::numbers::pi * x); };
      }
    }
    const std::size_t take = std::min(per_function, count - produced);
    for (std::size_t k = 0; k < take; ++k) {
      const int i = position(rng);
      out.push_back(smooth_sample(f, i, mirror(rng), family));
    }
    produced += take;
    ++function_index;
  }
}

// One stencil per jump function: points x_{98..101} with x_100 = 0 labelled.
Sample jump_sample(const std::function<double(int)>& value_at, FunctionFamily family) {
  Sample s;
  s.kind = SampleKind::kJump;
  s.family = family;
  for (int k = 0; k < 4; ++k) s.stencil.v[k] = value_at(kGridCenter - 2 + k);
  s.label = jump_label(s.stencil);
  return s;
}

// Log-weights of the flip target built from log-weights of the original output.
std::array<double, 2> flip_log_weights(const std::array<double, 2>& lw) {
  const double a = std::log(4.0) + lw[0];
  const double b = lw[1];
  const double m = std::max(a, b);
  const double log_sum = m + std::log(std::exp(a - m) + std::exp(b - m));
  return {lw[1] - log_sum, a - log_sum};
}

double sqr(double x) { return x * x; }

void backprop(const NetworkParams& p, const ForwardTrace& t, const std::array<double, 2>& dlogw, ParamVector& g) {
  // log-softmax backward
  const double hsum = dlogw[0] + dlogw[1];
  std::array<double, kOutputWidth> dz{};
  dz[0] = dlogw[0] - t.output.w0 * hsum;
  dz[1] = dlogw[1] - t.output.w1 * hsum;

  std::array<double, kHiddenWidth> da2{};
  for (int o = 0; o < kOutputWidth; ++o) {
    g[kB3Offset + o] += dz[o];
    for (int i = 0; i < kHiddenWidth; ++i) {
      g[kW3Offset + o * kHiddenWidth + i] += dz[o] * t.act2[i];
      da2[i] += p.w3(o, i) * dz[o];
    }
  }

  std::array<double, kHiddenWidth> da1{};
  for (int o = 0; o < kHiddenWidth; ++o) {
    const double dp = da2[o] * gelu_derivative(t.pre2[o]);
    g[kB2Offset + o] += dp;
    for (int i = 0; i < kHiddenWidth; ++i) {
      g[kW2Offset + o * kHiddenWidth + i] += dp * t.act1[i];
      da1[i] += p.w2(o, i) * dp;
    }
  }

  for (int o = 0; o < kHiddenWidth; ++o) {
    const double dp = da1[o] * gelu_derivative(t.pre1[o]);
    g[kB1Offset + o] += dp;
    for (int i = 0; i < kInputFeatures; ++i) g[kW1Offset + o * kInputFeatures + i] += dp * t.delta.d[i];
  }
}

void require_finite(double value, const char* term) {
  if (!std::isfinite(value)) {
    throw TrainingError(std::string("non-finite value in loss term ") + term);
  }
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Dataset generate_dataset(std::uint64_t seed, const DatasetLayout& layout) {
  std::mt19937_64 rng(seed);
  Dataset ds;
  ds.seed = seed;
  ds.samples.reserve(layout.cubic + layout.tanh_sin + layout.piecewise_constant + layout.linear_jump);

  append_smooth(ds.samples, rng, layout.cubic, layout.stencils_per_smooth_function, FunctionFamily::kCubic);
  append_smooth(ds.samples, rng, layout.tanh_sin, layout.stencils_per_smooth_function, FunctionFamily::kTanhSin);

  // First grid index on the right of the jump.
  const int edge = layout.jump_placement == JumpPlacement::kOneSided ? kGridCenter + 1 : kGridCenter;
  for (std::size_t k = 0; k < layout.piecewise_constant; ++k) {
    const double c0 = uniform(rng, -10.0, 10.0);
    const double c1 = uniform(rng, -10.0, 10.0);
    ds.samples.push_back(jump_sample([=](int j) { return j < edge ? c0 : c1; },
                                     FunctionFamily::kPiecewiseConstant));
  }
  std::bernoulli_distribution sign(0.5);
  for (std::size_t k = 0; k < layout.linear_jump; ++k) {
    const double slope = sign(rng) ? 1.0 : -1.0;
    const double d = uniform(rng, 0.5, 2.5);
    ds.samples.push_back(jump_sample(
        [=](int j) { return slope * grid_x(j) + (j >= edge ? d : 0.0); }, FunctionFamily::kLinearJump));
  }

  ds.counts[FunctionFamily::kCubic] = layout.cubic;
  ds.counts[FunctionFamily::kTanhSin] = layout.tanh_sin;
  ds.counts[FunctionFamily::kPiecewiseConstant] = layout.piecewise_constant;
  ds.counts[FunctionFamily::kLinearJump] = layout.linear_jump;
  return ds;
}

double smooth_label(const std::function<double(double)>& derivative, double x) { return derivative(x); }

double jump_label(const Stencil4& s, double dx) noexcept { return (s.v[2] - s.v[1]) / dx; }

double predict_derivative(const NetworkParams& p, const Stencil4& s, double dx) {
  const WeightPair wl = forward(p, s.left());
  const WeightPair wr = forward(p, s.right());
  const auto cl = candidate_fluxes(s.left());
  const auto cr = candidate_fluxes(s.right());
  const double h_left = wl.w0 * cl[0] + wl.w1 * cl[1];
  const double h_right = wr.w0 * cr[0] + wr.w1 * cr[1];
  return (h_right - h_left) / dx;
}

double loss_cad(const NetworkParams& p, std::span<const Sample> batch) {
  double sum = 0.0;
  for (const Sample& s : batch) sum += sqr(predict_derivative(p, s.stencil) - s.label);
  return sum / static_cast<double>(batch.size());
}

double loss_sym(const NetworkParams& p, std::span<const Sample> batch) {
  double sum = 0.0;
  for (const Sample& s : batch) {
    for (const Stencil3& sub : {s.stencil.left(), s.stencil.right()}) {
      const ForwardTrace t = forward_trace(p, sub);
      const ForwardTrace tf = forward_trace(p, sub.flipped());
      const auto target = flip_log_weights(t.log_weights);
      sum += sqr(tf.log_weights[0] - target[0]) + sqr(tf.log_weights[1] - target[1]);
    }
  }
  return sum / static_cast<double>(batch.size());
}

double loss_ln(const NetworkParams& p, std::span<const Sample> batch) {
  double sum = 0.0;
  for (const Sample& s : batch) {
    for (const Stencil3& sub : {s.stencil.left(), s.stencil.right()}) {
      const double lambda = smoothness_gauge(sub);
      if (lambda == 0.0) continue;
      const ForwardTrace t = forward_trace(p, sub);
      sum += lambda * sqr(std::numbers::ln2 + t.log_weights[0] - t.log_weights[1]);
    }
  }
  return sum / static_cast<double>(batch.size());
}

LossBreakdown total_loss(const NetworkParams& p, std::span<const Sample> batch, const Hyperparams& h) {
  LossBreakdown b;
  b.l_cad = loss_cad(p, batch);
  b.l_sym = loss_sym(p, batch);
  b.l_ln = loss_ln(p, batch);
  b.total = b.l_cad + h.c * b.l_sym + h.d * b.l_ln;
  return b;
}

LossAndGradient gradient(const NetworkParams& p, std::span<const Sample> batch, const Hyperparams& h) {
  if (batch.empty()) {
    throw TrainingError("gradient of an empty batch");
  }
  LossAndGradient out;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  const double dx = kTrainingSpacing;

  for (const Sample& sample : batch) {
    const std::array<Stencil3, 2> subs = {sample.stencil.left(), sample.stencil.right()};
    std::array<ForwardTrace, 2> trace = {forward_trace(p, subs[0]), forward_trace(p, subs[1])};
    std::array<ForwardTrace, 2> flipped = {forward_trace(p, subs[0].flipped()), forward_trace(p, subs[1].flipped())};
    std::array<std::array<double, 2>, 2> dlog{};
    std::array<std::array<double, 2>, 2> dlog_flipped{};

    // conservative approximation: (h_{i+1/2} - h_{i-1/2}) / dx, left substencil gives h_{i-1/2}
    const auto c_left = candidate_fluxes(subs[0]);
    const auto c_right = candidate_fluxes(subs[1]);
    const WeightPair& wl = trace[0].output;
    const WeightPair& wr = trace[1].output;
    const double pred = ((wr.w0 * c_right[0] + wr.w1 * c_right[1]) - (wl.w0 * c_left[0] + wl.w1 * c_left[1])) / dx;
    const double residual = pred - sample.label;
    out.loss.l_cad += residual * residual;
    const double g_pred = 2.0 * residual * inv_n / dx;
    require_finite(g_pred, "l_cad");
    dlog[1][0] += g_pred * c_right[0] * wr.w0;
    dlog[1][1] += g_pred * c_right[1] * wr.w1;
    dlog[0][0] -= g_pred * c_left[0] * wl.w0;
    dlog[0][1] -= g_pred * c_left[1] * wl.w1;

    for (int s = 0; s < 2; ++s) {
      const auto& lw = trace[s].log_weights;
      const auto& lf = flipped[s].log_weights;

      const auto target = flip_log_weights(lw);
      const double e0 = lf[0] - target[0];
      const double e1 = lf[1] - target[1];
      out.loss.l_sym += e0 * e0 + e1 * e1;
      const double scale = h.c * inv_n;
      require_finite(e0 + e1, "l_sym");
      dlog_flipped[s][0] += scale * 2.0 * e0;
      dlog_flipped[s][1] += scale * 2.0 * e1;
      // d target / d lw: target0 = lw1 - L, target1 = log4 + lw0 - L,
      // dL/dlw0 = exp(target1), dL/dlw1 = exp(target0)
      const double dt0 = -scale * 2.0 * e0;
      const double dt1 = -scale * 2.0 * e1;
      const double q0 = std::exp(target[0]);
      const double q1 = std::exp(target[1]);
      dlog[s][0] += dt1 - (dt0 + dt1) * q1;
      dlog[s][1] += dt0 - (dt0 + dt1) * q0;

      const double lambda = smoothness_gauge(subs[s]);
      if (lambda != 0.0) {
        const double bracket = std::numbers::ln2 + lw[0] - lw[1];
        out.loss.l_ln += lambda * bracket * bracket;
        const double gl = h.d * inv_n * 2.0 * lambda * bracket;
        require_finite(gl, "l_ln");
        dlog[s][0] += gl;
        dlog[s][1] -= gl;
      }
    }

    for (int s = 0; s < 2; ++s) {
      backprop(p, trace[s], dlog[s], out.grad);
      if (h.c != 0.0) backprop(p, flipped[s], dlog_flipped[s], out.grad);
    }
  }

  out.loss.l_cad *= inv_n;
  out.loss.l_sym *= inv_n;
  out.loss.l_ln *= inv_n;
  out.loss.total = out.loss.l_cad + h.c * out.loss.l_sym + h.d * out.loss.l_ln;
  require_finite(out.loss.total, "total");
  for (double g : out.grad) {
    if (!std::isfinite(g)) {
      throw TrainingError("non-finite gradient produced during network backpropagation");
    }
  }
  return out;
}

void adamw_step(ParamVector& params, const ParamVector& grad, AdamState& state, double lr, double weight_decay) {
  ++state.step;
  const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state.step));
  for (std::size_t k = 0; k < params.size(); ++k) {
    params[k] -= lr * weight_decay * params[k];
    state.m[k] = kAdamBeta1 * state.m[k] + (1.0 - kAdamBeta1) * grad[k];
    state.v[k] = kAdamBeta2 * state.v[k] + (1.0 - kAdamBeta2) * grad[k] * grad[k];
    const double m_hat = state.m[k] / bc1;
    const double v_hat = state.v[k] / bc2;
    params[k] -= lr * m_hat / (std::sqrt(v_hat) + kAdamEpsilon);
  }
}

NetworkParams initialize_params(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  NetworkParams p;
  auto fill = [&](int offset, int rows, int cols) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
    for (int k = 0; k < rows * cols; ++k) p.values[offset + k] = uniform(rng, -bound, bound);
  };
  fill(kW1Offset, kHiddenWidth, kInputFeatures);
  fill(kW2Offset, kHiddenWidth, kHiddenWidth);
  fill(kW3Offset, kOutputWidth, kHiddenWidth);
  p.metadata.rng_seed = seed;
  return p;
}

TrainingResult train(const Hyperparams& h, const Dataset& dataset, const EpochCallback& on_epoch) {
  if (!(h.lr > 0.0) || h.batch_size <= 0) {
    throw TrainingError("learning rate and batch size must be positive");
  }
  if (dataset.samples.empty()) {
    throw TrainingError("empty dataset");
  }

  TrainingResult result;
  NetworkParams params = initialize_params(h.seed);
  params.metadata.hyper_c = h.c;
  params.metadata.hyper_d = h.d;
  AdamState state;

  std::mt19937_64 shuffle_rng(h.seed + 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(dataset.samples.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::vector<Sample> batch;
  batch.reserve(static_cast<std::size_t>(h.batch_size));

  double best_total = std::numeric_limits<double>::infinity();
  std::int64_t step = 0;
  for (int epoch = 1; epoch <= h.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    LossBreakdown sum;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(h.batch_size)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(h.batch_size));
      batch.clear();
      for (std::size_t k = start; k < stop; ++k) batch.push_back(dataset.samples[order[k]]);

      LossAndGradient lg;
      try {
        lg = gradient(params, batch, h);
      } catch (const std::exception& e) {
        throw TrainingError("training diverged at step " + std::to_string(step) + " (epoch " +
                            std::to_string(epoch) + "): " + e.what());
      }
      const double weight = static_cast<double>(batch.size());
      sum.l_cad += lg.loss.l_cad * weight;
      sum.l_sym += lg.loss.l_sym * weight;
      sum.l_ln += lg.loss.l_ln * weight;
      sum.total += lg.loss.total * weight;
      seen += batch.size();

      adamw_step(params.values, lg.grad, state, h.lr, h.weight_decay);
      ++step;
    }

    EpochRecord record;
    record.epoch = epoch;
    const double inv = 1.0 / static_cast<double>(seen);
    record.mean = {sum.l_cad * inv, sum.l_sym * inv, sum.l_ln * inv, sum.total * inv};
    result.history.push_back(record);
    if (on_epoch) on_epoch(record);

    if (record.mean.total < best_total) {
      best_total = record.mean.total;
      result.best_epoch = epoch;
      result.params = params;
      result.params.metadata.training_loss = record.mean.total;
    }
  }

  result.final_params = params;
  result.final_params.metadata.training_loss = result.history.back().mean.total;
  if (result.best_epoch == 0) {
    result.params = result.final_params;
  }
  return result;
}

TrainingConfig parse_training_config_text(const std::string& text) {
  TrainingConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    auto real = [&] {
      try {
        return std::stod(value);
      } catch (const std::logic_error&) {
        throw std::invalid_argument(where + "bad value for '" + key + "'");
      }
    };
    auto integer = [&] {
      try {
        return std::stoll(value);
      } catch (const std::logic_error&) {
        throw std::invalid_argument(where + "bad value for '" + key + "'");
      }
    };
    if (key == "C") cfg.hyper.c = real();
    else if (key == "D") cfg.hyper.d = real();
    else if (key == "lr") cfg.hyper.lr = real();
    else if (key == "weight_decay") cfg.hyper.weight_decay = real();
    else if (key == "batch_size") cfg.hyper.batch_size = static_cast<int>(integer());
    else if (key == "epochs") cfg.hyper.epochs = static_cast<int>(integer());
    else if (key == "seed") cfg.hyper.seed = static_cast<std::uint64_t>(integer());
    else if (key == "dataset_seed") cfg.dataset_seed = static_cast<std::uint64_t>(integer());
    else if (key == "jump_placement") {
      if (value == "one_sided") cfg.layout.jump_placement = JumpPlacement::kOneSided;
      else if (value == "across") cfg.layout.jump_placement = JumpPlacement::kAcross;
      else throw std::invalid_argument(where + "jump_placement must be one_sided or across");
    }
    else if (key == "output") cfg.output = value;
    else if (key == "loss_csv") cfg.loss_csv = value;
    else throw std::invalid_argument(where + "unknown key '" + key + "'");
  }
  if (!(cfg.hyper.lr > 0.0) || cfg.hyper.batch_size <= 0 || cfg.hyper.epochs <= 0) {
    throw std::invalid_argument("config: lr, batch_size and epochs must be positive");
  }
  return cfg;
}

TrainingConfig parse_training_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open training config: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_training_config_text(buffer.str());
}

void write_loss_history(const std::vector<EpochRecord>& history, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write loss history: " + path.string());
  }
  out << "epoch,l_cad,l_sym,l_ln,total\n" << std::setprecision(17);
  for (const EpochRecord& r : history) {
    out << r.epoch << ',' << r.mean.l_cad << ',' << r.mean.l_sym << ',' << r.mean.l_ln << ',' << r.mean.total << '\n';
  }
}

}  // namespace cadweno
