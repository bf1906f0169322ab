/*
 * Copyright 2026 The taylorx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "taylorx/model_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "taylorx/error.hpp"

namespace taylorx {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join(const Vector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ' ';
    s += fmt(v[i]);
  }
  return s;
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

struct Line {
  std::size_t number;
  std::string key;    // empty for bare lines
  std::string value;  // the whole text for bare lines
};

struct Section {
  std::string name;
  std::optional<std::size_t> index;
  std::size_t line;
  std::vector<Line> lines;
};

class Parser {
 public:
  Parser(std::string_view text, std::string source)
      : text_(text), source_(std::move(source)) {}

  std::vector<Section> sections() {
    std::vector<Section> out;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      std::size_t end = text_.find('\n', pos);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view raw = text_.substr(pos, end - pos);
      pos = end + 1;
      ++number;
      auto hash = raw.find('#');
      if (hash != std::string_view::npos) raw = raw.substr(0, hash);
      std::string line = trim(raw);
      if (line.empty()) {
        if (end == text_.size()) break;
        continue;
      }
      if (line.front() == '[') {
        if (line.back() != ']') fail(number, "", "unterminated section header");
        std::string inner = trim(std::string_view(line).substr(1, line.size() - 2));
        Section s;
        s.line = number;
        auto space = inner.find(' ');
        s.name = inner.substr(0, space);
        if (space != std::string::npos) {
          s.index = to_index(trim(std::string_view(inner).substr(space + 1)),
                             number, "section index");
        }
        out.push_back(std::move(s));
      } else {
        if (out.empty()) fail(number, "", "entry before any section header");
        Line l;
        l.number = number;
        auto eq = line.find('=');
        if (eq != std::string::npos) {
          l.key = trim(std::string_view(line).substr(0, eq));
          l.value = trim(std::string_view(line).substr(eq + 1));
          if (l.key.empty()) fail(number, "", "missing key before '='");
        } else {
          l.value = line;
        }
        out.back().lines.push_back(std::move(l));
      }
      if (end == text_.size()) break;
    }
    return out;
  }

  [[noreturn]] void fail(std::size_t line, const std::string& field,
                         const std::string& message) const {
    throw ParseError(source_, line, field, message);
  }

  double to_double(const std::string& s, std::size_t line,
                   const std::string& field) const {
    if (s.empty()) fail(line, field, "expected a number");
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
      fail(line, field, "'" + s + "' is not a finite number");
    }
    return v;
  }

  std::size_t to_index(const std::string& s, std::size_t line,
                       const std::string& field) const {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      fail(line, field, "'" + s + "' is not a non-negative integer");
    }
    errno = 0;
    unsigned long long v = std::strtoull(s.c_str(), nullptr, 10);
    if (errno == ERANGE || v > (1ull << 32)) fail(line, field, "value too large");
    return static_cast<std::size_t>(v);
  }

  Vector to_vector(const std::string& s, std::size_t line,
                   const std::string& field) const {
    Vector v;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) v.push_back(to_double(tok, line, field));
    if (v.empty()) fail(line, field, "expected at least one number");
    return v;
  }

 private:
  std::string_view text_;
  std::string source_;
};

Activation parse_activation(const Parser& p, const std::string& name,
                            double sharpness, std::size_t line) {
  try {
    return Activation::parse(name, sharpness);
  } catch (const Error& e) {
    p.fail(line, "activation", e.what());
  }
}

void check_size(const Parser& p, const Vector& v, std::size_t n,
                std::size_t line, const std::string& field) {
  if (v.size() != n) {
    p.fail(line, field,
           "expected " + std::to_string(n) + " values, got " +
               std::to_string(v.size()));
  }
}

}  // namespace

std::string serialize_model(const Model& model) {
  std::ostringstream out;
  out << "# taylorx model\n[meta]\nkind = " << to_string(model.kind())
      << "\ninputs = " << model.num_inputs() << "\n";
  if (!model.name().empty()) out << "name = " << model.name() << "\n";
  switch (model.kind()) {
    case ModelKind::kPolynomial: {
      const Polynomial& p = model.poly();
      Vector linear(p.num_inputs, 0.0);
      std::map<std::pair<std::size_t, std::size_t>, double> quad;
      std::map<std::vector<std::pair<std::size_t, int>>, double> other;
      for (const Monomial& m : p.terms) {
        if (m.powers.size() == 1 && m.powers[0].second == 1) {
          linear[m.powers[0].first] += m.coefficient;
        } else if (m.powers.size() == 1 && m.powers[0].second == 2) {
          quad[{m.powers[0].first, m.powers[0].first}] += m.coefficient;
        } else if (m.powers.size() == 2 && m.powers[0].second == 1 &&
                   m.powers[1].second == 1) {
          quad[{m.powers[0].first, m.powers[1].first}] += m.coefficient;
        } else {
          other[m.powers] += m.coefficient;
        }
      }
      out << "[poly]\nconstant = " << fmt(p.constant) << "\nlinear = "
          << join(linear) << "\n";
      for (const auto& [ij, c] : quad) {
        out << ij.first << "," << ij.second << "," << fmt(c) << "\n";
      }
      if (!other.empty()) {
        out << "[monomial]\n";
        for (const auto& [powers, c] : other) {
          out << fmt(c) << " ;";
          for (auto [i, e] : powers) out << " " << i << ":" << e;
          out << "\n";
        }
      }
      break;
    }
    case ModelKind::kMlp: {
      const auto& layers = model.layers();
      for (std::size_t l = 0; l < layers.size(); ++l) {
        const DenseLayer& layer = layers[l];
        out << "[layer " << l << "]\nactivation = " << layer.activation.name()
            << "\n";
        if (layer.activation.kind == ActivationKind::kSoftplus) {
          out << "sharpness = " << fmt(layer.activation.sharpness) << "\n";
        }
        for (std::size_t j = 0; j < layer.outputs(); ++j) {
          Vector row(layer.weights.data.begin() + j * layer.inputs(),
                     layer.weights.data.begin() + (j + 1) * layer.inputs());
          out << "row = " << join(row) << "\n";
        }
        out << "bias = " << join(layer.bias) << "\n";
      }
      break;
    }
    case ModelKind::kTinyCnn: {
      const ConvNetSpec& s = model.conv();
      out << "[net]\nheight = " << s.height << "\nwidth = " << s.width
          << "\nchannels = " << s.channels
          << "\nactivation = " << s.activation.name() << "\n";
      if (s.activation.kind == ActivationKind::kSoftplus) {
        out << "sharpness = " << fmt(s.activation.sharpness) << "\n";
      }
      for (std::size_t k = 0; k < s.channels; ++k) {
        out << "[conv " << k << "]\n";
        for (int r = 0; r < 3; ++r) {
          out << "row = " << fmt(s.kernels[k][r * 3]) << " "
              << fmt(s.kernels[k][r * 3 + 1]) << " "
              << fmt(s.kernels[k][r * 3 + 2]) << "\n";
        }
        out << "bias = " << fmt(s.conv_bias[k]) << "\n";
      }
      out << "[head]\nweights = " << join(s.head_weights)
          << "\nbias = " << fmt(s.head_bias) << "\n";
      break;
    }
  }
  return out.str();
}

Model parse_model(std::string_view text, const std::string& source) {
  Parser p(text, source);
  std::vector<Section> sections = p.sections();
  if (sections.empty() || sections.front().name != "meta") {
    p.fail(sections.empty() ? 1 : sections.front().line, "",
           "the file must start with a [meta] section");
  }
  std::string kind;
  std::optional<std::size_t> inputs;
  std::string name;
  std::size_t meta_line = sections.front().line;
  std::size_t kind_line = meta_line;
  for (const Line& l : sections.front().lines) {
    if (l.key == "kind") {
      kind = l.value;
      kind_line = l.number;
    } else if (l.key == "inputs") {
      inputs = p.to_index(l.value, l.number, "inputs");
    } else if (l.key == "name") {
      name = l.value;
    } else {
      p.fail(l.number, l.key.empty() ? l.value : l.key, "unknown [meta] key");
    }
  }
  if (kind.empty()) p.fail(meta_line, "kind", "missing model kind");

  auto result = [&](Model m) {
    m.set_name(name);
    return m;
  };

  if (kind == "polynomial") {
    if (!inputs || *inputs == 0) p.fail(meta_line, "inputs", "missing or zero");
    Polynomial poly;
    poly.num_inputs = *inputs;
    for (std::size_t s = 1; s < sections.size(); ++s) {
      const Section& sec = sections[s];
      if (sec.name == "poly") {
        for (const Line& l : sec.lines) {
          if (l.key == "constant") {
            poly.constant = p.to_double(l.value, l.number, "constant");
          } else if (l.key == "linear") {
            Vector c = p.to_vector(l.value, l.number, "linear");
            check_size(p, c, *inputs, l.number, "linear");
            for (std::size_t i = 0; i < c.size(); ++i) {
              if (c[i] != 0.0) poly.terms.push_back({c[i], {{i, 1}}});
            }
          } else if (l.key.empty()) {
            std::vector<std::string> parts;
            std::stringstream ss(l.value);
            std::string part;
            while (std::getline(ss, part, ',')) parts.push_back(trim(part));
            if (parts.size() != 3) {
              p.fail(l.number, "term", "expected an i,j,c triple");
            }
            std::size_t i = p.to_index(parts[0], l.number, "term i");
            std::size_t j = p.to_index(parts[1], l.number, "term j");
            double c = p.to_double(parts[2], l.number, "term c");
            if (i >= *inputs || j >= *inputs) {
              p.fail(l.number, "term", "variable index out of range");
            }
            if (i == j) {
              poly.terms.push_back({c, {{i, 2}}});
            } else {
              poly.terms.push_back({c, {{std::min(i, j), 1}, {std::max(i, j), 1}}});
            }
          } else {
            p.fail(l.number, l.key, "unknown [poly] key");
          }
        }
      } else if (sec.name == "monomial") {
        for (const Line& l : sec.lines) {
          if (!l.key.empty()) p.fail(l.number, l.key, "unexpected key");
          auto semi = l.value.find(';');
          if (semi == std::string::npos) {
            p.fail(l.number, "monomial", "expected 'c ; i:e ...'");
          }
          Monomial m;
          m.coefficient =
              p.to_double(trim(l.value.substr(0, semi)), l.number, "coefficient");
          std::istringstream in(l.value.substr(semi + 1));
          std::string tok;
          while (in >> tok) {
            auto colon = tok.find(':');
            if (colon == std::string::npos) {
              p.fail(l.number, "monomial", "'" + tok + "' is not i:e");
            }
            std::size_t i = p.to_index(tok.substr(0, colon), l.number, "variable");
            std::size_t e = p.to_index(tok.substr(colon + 1), l.number, "exponent");
            if (i >= *inputs) p.fail(l.number, "variable", "index out of range");
            if (e == 0 || e > 64) p.fail(l.number, "exponent", "must be 1..64");
            m.powers.emplace_back(i, static_cast<int>(e));
          }
          if (m.powers.empty()) p.fail(l.number, "monomial", "no variables");
          poly.terms.push_back(std::move(m));
        }
      } else {
        p.fail(sec.line, sec.name, "unknown section for a polynomial");
      }
    }
    return result(Model::polynomial(std::move(poly)));
  }

  if (kind == "mlp") {
    std::vector<DenseLayer> layers;
    for (std::size_t s = 1; s < sections.size(); ++s) {
      const Section& sec = sections[s];
      if (sec.name != "layer") {
        p.fail(sec.line, sec.name, "unknown section for an mlp");
      }
      if (!sec.index || *sec.index != layers.size()) {
        p.fail(sec.line, "layer", "layers must be numbered 0, 1, 2, ...");
      }
      std::string act = "sigmoid";
      double sharpness = 1.0;
      std::size_t act_line = sec.line;
      std::vector<Vector> rows;
      std::optional<Vector> bias;
      std::size_t bias_line = sec.line;
      for (const Line& l : sec.lines) {
        if (l.key == "activation") {
          act = l.value;
          act_line = l.number;
        } else if (l.key == "sharpness") {
          sharpness = p.to_double(l.value, l.number, "sharpness");
        } else if (l.key == "row") {
          rows.push_back(p.to_vector(l.value, l.number, "row"));
          if (rows.size() > 1) {
            check_size(p, rows.back(), rows.front().size(), l.number, "row");
          }
        } else if (l.key == "bias") {
          bias = p.to_vector(l.value, l.number, "bias");
          bias_line = l.number;
        } else {
          p.fail(l.number, l.key.empty() ? l.value : l.key,
                 "unknown [layer] key");
        }
      }
      if (rows.empty()) p.fail(sec.line, "row", "layer has no weight rows");
      if (!bias) p.fail(sec.line, "bias", "layer has no bias row");
      check_size(p, *bias, rows.size(), bias_line, "bias");
      DenseLayer layer;
      layer.weights = Matrix(rows.size(), rows.front().size());
      for (std::size_t j = 0; j < rows.size(); ++j) {
        for (std::size_t i = 0; i < rows[j].size(); ++i) {
          layer.weights(j, i) = rows[j][i];
        }
      }
      layer.bias = std::move(*bias);
      layer.activation = parse_activation(p, act, sharpness, act_line);
      if (!layers.empty() && layers.back().outputs() != layer.inputs()) {
        p.fail(sec.line, "row",
               "layer expects " + std::to_string(layer.inputs()) +
                   " inputs but the previous layer has " +
                   std::to_string(layers.back().outputs()) + " outputs");
      }
      if (layers.empty() && inputs && *inputs != layer.inputs()) {
        p.fail(sec.line, "row", "first layer width disagrees with inputs");
      }
      layers.push_back(std::move(layer));
    }
    if (layers.empty()) p.fail(meta_line, "layer", "mlp has no layers");
    if (layers.back().outputs() != 1) {
      p.fail(sections.back().line, "row", "the last layer needs one output");
    }
    return result(Model::mlp(std::move(layers)));
  }

  if (kind == "tiny-cnn") {
    ConvNetSpec spec;
    std::optional<std::size_t> height, width, channels;
    std::string act = "sigmoid";
    double sharpness = 1.0;
    std::size_t act_line = meta_line;
    std::map<std::size_t, std::pair<std::array<double, 9>, double>> convs;
    bool head = false;
    std::size_t head_line = meta_line;
    for (std::size_t s = 1; s < sections.size(); ++s) {
      const Section& sec = sections[s];
      if (sec.name == "net") {
        for (const Line& l : sec.lines) {
          if (l.key == "height") {
            height = p.to_index(l.value, l.number, "height");
          } else if (l.key == "width") {
            width = p.to_index(l.value, l.number, "width");
          } else if (l.key == "channels") {
            channels = p.to_index(l.value, l.number, "channels");
          } else if (l.key == "activation") {
            act = l.value;
            act_line = l.number;
          } else if (l.key == "sharpness") {
            sharpness = p.to_double(l.value, l.number, "sharpness");
          } else {
            p.fail(l.number, l.key.empty() ? l.value : l.key,
                   "unknown [net] key");
          }
        }
      } else if (sec.name == "conv") {
        if (!sec.index) p.fail(sec.line, "conv", "missing channel index");
        if (convs.count(*sec.index)) p.fail(sec.line, "conv", "duplicate channel");
        std::array<double, 9> k{};
        std::size_t nrows = 0;
        std::optional<double> bias;
        for (const Line& l : sec.lines) {
          if (l.key == "row") {
            Vector r = p.to_vector(l.value, l.number, "row");
            check_size(p, r, 3, l.number, "row");
            if (nrows >= 3) p.fail(l.number, "row", "kernels have three rows");
            for (int c = 0; c < 3; ++c) k[nrows * 3 + c] = r[c];
            ++nrows;
          } else if (l.key == "bias") {
            bias = p.to_double(l.value, l.number, "bias");
          } else {
            p.fail(l.number, l.key.empty() ? l.value : l.key,
                   "unknown [conv] key");
          }
        }
        if (nrows != 3) p.fail(sec.line, "row", "kernels need three rows");
        if (!bias) p.fail(sec.line, "bias", "conv channel has no bias");
        convs[*sec.index] = {k, *bias};
      } else if (sec.name == "head") {
        head = true;
        head_line = sec.line;
        bool has_bias = false;
        for (const Line& l : sec.lines) {
          if (l.key == "weights") {
            spec.head_weights = p.to_vector(l.value, l.number, "weights");
          } else if (l.key == "bias") {
            spec.head_bias = p.to_double(l.value, l.number, "bias");
            has_bias = true;
          } else {
            p.fail(l.number, l.key.empty() ? l.value : l.key,
                   "unknown [head] key");
          }
        }
        if (!has_bias) p.fail(sec.line, "bias", "head has no bias");
      } else {
        p.fail(sec.line, sec.name, "unknown section for a tiny-cnn");
      }
    }
    if (!height || !width || !channels || *height == 0 || *width == 0 ||
        *channels == 0) {
      p.fail(meta_line, "net", "height, width and channels must be positive");
    }
    if (!head) p.fail(meta_line, "head", "missing [head] section");
    spec.height = *height;
    spec.width = *width;
    spec.channels = *channels;
    spec.activation = parse_activation(p, act, sharpness, act_line);
    for (std::size_t k = 0; k < *channels; ++k) {
      auto it = convs.find(k);
      if (it == convs.end()) {
        p.fail(meta_line, "conv", "missing [conv " + std::to_string(k) + "]");
      }
      spec.kernels.push_back(it->second.first);
      spec.conv_bias.push_back(it->second.second);
    }
    if (convs.size() != *channels) {
      p.fail(meta_line, "conv", "more conv sections than channels");
    }
    check_size(p, spec.head_weights, *channels, head_line, "weights");
    if (inputs && *inputs != *height * *width) {
      p.fail(meta_line, "inputs", "disagrees with height x width");
    }
    return result(Model::tiny_cnn(std::move(spec)));
  }
  p.fail(kind_line, "kind", "unknown model kind '" + kind + "'");
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str(), path);
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file " + path);
  out << serialize_model(model);
}

}  // namespace taylorx
