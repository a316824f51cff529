#include "msvm/model_io.hpp"

#include <cstdlib>
#include <fstream>
#include <ios>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "msvm/error.hpp"

namespace msvm {

namespace {

void write_matrix(std::ostream& out, const char* name, const Matrix& m) {
  out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ' ';
      out << row[j];
    }
    out << '\n';
  }
}

double parse_double(const std::string& token, const std::string& context) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size()) {
    throw DataError("model file: bad number '" + token + "' in " + context);
  }
  return v;
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::istringstream line(const std::string& expected_key) {
    std::string text;
    if (!std::getline(in_, text)) {
      throw DataError("model file: unexpected end of input, expected '" + expected_key + "'");
    }
    ++line_no_;
    std::istringstream ss(text);
    std::string key;
    ss >> key;
    if (key != expected_key) {
      throw DataError("model file line " + std::to_string(line_no_) + ": expected '" +
                      expected_key + "', found '" + key + "'");
    }
    return ss;
  }

  std::string word(const std::string& key) {
    auto ss = line(key);
    std::string value;
    ss >> value;
    return value;
  }

  Matrix matrix(const std::string& name) {
    auto ss = line("matrix");
    std::string got;
    std::size_t rows = 0;
    std::size_t cols = 0;
    ss >> got >> rows >> cols;
    if (got != name) throw DataError("model file: expected matrix '" + name + "', found '" + got + "'");
    if (rows == 0 && cols == 0) return Matrix();
    std::vector<double> values;
    values.reserve(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
      std::string text;
      if (!std::getline(in_, text)) throw DataError("model file: truncated matrix '" + name + "'");
      ++line_no_;
      std::istringstream row(text);
      std::string token;
      std::size_t count = 0;
      while (row >> token) {
        values.push_back(parse_double(token, "matrix '" + name + "'"));
        ++count;
      }
      if (count != cols) {
        throw DataError("model file line " + std::to_string(line_no_) + ": matrix '" + name +
                        "' row has " + std::to_string(count) + " values, expected " +
                        std::to_string(cols));
      }
    }
    return Matrix(rows, cols, std::move(values));
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

ModelKind parse_kind(const std::string& s) {
  if (s == "matrix") return ModelKind::MatrixSvm;
  if (s == "br") return ModelKind::BinaryRelevance;
  if (s == "ls") return ModelKind::LeastSquares;
  throw DataError("model file: unknown model kind '" + s + "'");
}

}  // namespace

void save_model(const TrainedModel& model, std::ostream& out) {
  const auto flags = out.flags();
  out << std::hexfloat;
  out << "msvm-model " << kModelFormatVersion << '\n';
  out << "kind " << to_string(model.kind) << '\n';
  if (model.kernel.kind() == KernelKind::Linear) {
    out << "kernel linear\n";
  } else {
    out << "kernel rbf " << model.kernel.gamma() << '\n';
  }
  out << "c " << model.c << '\n';
  out << "fit_seconds " << model.fit_seconds << '\n';
  out << "iterations " << model.solver_iterations << '\n';
  out << "converged " << (model.converged ? 1 : 0) << '\n';
  out << "shared_gram " << (model.shared_gram ? 1 : 0) << '\n';
  write_matrix(out, "x_train", model.x_train);
  write_matrix(out, "coeff", model.coeff);
  write_matrix(out, "weights", model.weights);
  out << "end\n";
  out.flags(flags);
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  save_model(model, out);
  if (!out) throw DataError("failed writing model to '" + path.string() + "'");
}

TrainedModel load_model(std::istream& in) {
  Reader r(in);
  const std::string version = r.word("msvm-model");
  if (version != std::to_string(kModelFormatVersion)) {
    throw DataError("model file: unsupported format version '" + version + "'");
  }
  TrainedModel model;
  model.kind = parse_kind(r.word("kind"));
  {
    auto ss = r.line("kernel");
    std::string kind;
    ss >> kind;
    if (kind == "linear") {
      model.kernel = KernelSpec::linear();
    } else if (kind == "rbf") {
      std::string p;
      ss >> p;
      model.kernel = KernelSpec::rbf(parse_double(p, "kernel"));
    } else {
      throw DataError("model file: unknown kernel '" + kind + "'");
    }
  }
  model.c = parse_double(r.word("c"), "c");
  model.fit_seconds = parse_double(r.word("fit_seconds"), "fit_seconds");
  model.solver_iterations = std::stoull(r.word("iterations"));
  model.converged = r.word("converged") == "1";
  model.shared_gram = r.word("shared_gram") == "1";
  model.x_train = r.matrix("x_train");
  model.coeff = r.matrix("coeff");
  model.weights = r.matrix("weights");
  r.line("end");
  return model;
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file '" + path.string() + "'");
  return load_model(in);
}

}  // namespace msvm
