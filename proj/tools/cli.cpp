#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "otsubis/otsubis.hpp"

namespace otsubis::cli {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SearchFlags {
  std::optional<double> plateau_eps;
  int width_stop = 2;
  std::vector<int> init;

  void attach(CLI::App* cmd) {
    cmd->add_option("--plateau-eps", plateau_eps, "Stop early when the three probe scores agree within this relative spread");
    cmd->add_option("--width-stop", width_stop, "Stop once t_high - t_low is at most this")->capture_default_str();
    cmd->add_option("--init", init, "Initial triplet low,mid,high (default 0,127,255)")->delimiter(',')->expected(3);
  }

  BisectionConfig config() const {
    BisectionConfig cfg;
    if (!init.empty()) cfg.initial = Triplet{init[0], init[1], init[2]};
    cfg.width_stop = width_stop;
    cfg.plateau_epsilon = plateau_eps;
    try {
      cfg.validate();
    } catch (const InvalidConfig& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }
};

/// Writes to the named file, or to `out` when the path is empty.
template <class Fn>
void emit(const std::string& path, std::ostream& out, Fn&& fn) {
  if (path.empty()) {
    fn(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ImageFormatError(ImageFormatError::Kind::Io, "cannot open " + path + " for writing");
  fn(file);
  if (!file) throw ImageFormatError(ImageFormatError::Kind::Io, "write failure on " + path);
}

bool has_image_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".pgm" || (ext == ".png" && png_supported());
}

std::vector<std::string> discover_images(const fs::path& root) {
  if (!fs::is_directory(root)) throw UsageError("not a directory: " + root.string());
  std::vector<std::string> rel;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && has_image_extension(entry.path()))
      rel.push_back(fs::relative(entry.path(), root).generic_string());
  }
  std::sort(rel.begin(), rel.end());
  return rel;
}

std::map<std::string, std::string> read_category_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open category map " + path);
  std::map<std::string, std::string> map;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw UsageError("category map line without comma: " + line);
    const std::string id = line.substr(0, comma);
    const std::string category = line.substr(comma + 1);
    if (first && id == "image" && category == "category") {
      first = false;
      continue;
    }
    first = false;
    map[id] = category;
  }
  return map;
}

ReportFormat parse_format(const std::string& f) {
  if (f == "csv") return ReportFormat::Csv;
  if (f == "markdown") return ReportFormat::Markdown;
  return ReportFormat::Json;
}

std::string root_table_row(const BracketStep& s, int k) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "| %d | %.3f | %.3f | %.3f | %.3f | [%.3f, %.3f] |", k, s.a, s.b, s.c, s.fc, s.next_a,
                s.next_b);
  return buf;
}

double transcendental(double x) { return std::exp(x) - 3.0 * x - 2.0; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Otsu thresholding with exhaustive and bisection search", "otsubis"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  // hist
  std::string input, output;
  auto* hist = app.add_subcommand("hist", "Print the 256-bin histogram as index,count CSV");
  hist->add_option("image", input, "Input PGM/PNG")->required();
  hist->add_option("-o,--output", output, "Write to file instead of stdout");

  // profile
  auto* profile = app.add_subcommand("profile", "Print the between-class variance profile as t,sigma CSV");
  profile->add_option("image", input, "Input PGM/PNG")->required();
  profile->add_option("-o,--output", output, "Write to file instead of stdout");

  // threshold
  std::string method = "bisection";
  bool trace = false;
  std::string mask_path;
  std::string polarity = "fg-white";
  bool ascii = false;
  SearchFlags search_flags;
  auto* threshold = app.add_subcommand("threshold", "Select a threshold and optionally write the binary mask");
  threshold->add_option("image", input, "Input PGM/PNG")->required();
  threshold->add_option("--method", method, "exhaustive or bisection")
      ->check(CLI::IsMember({"exhaustive", "bisection"}))
      ->capture_default_str();
  threshold->add_flag("--trace", trace, "Emit the bisection trace as JSON lines");
  threshold->add_option("--mask", mask_path, "Write the binary mask PGM here");
  threshold->add_option("--polarity", polarity, "fg-white (p >= t is 255) or fg-black")
      ->check(CLI::IsMember({"fg-white", "fg-black"}))
      ->capture_default_str();
  threshold->add_flag("--ascii", ascii, "Write the mask as plain (P2) PGM");
  search_flags.attach(threshold);

  // compare
  std::string format = "csv";
  auto* compare_cmd = app.add_subcommand("compare", "Run both searches on one image and print the comparison record");
  compare_cmd->add_option("image", input, "Input PGM/PNG")->required();
  compare_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  search_flags.attach(compare_cmd);

  // bench
  std::string categories_path;
  std::string table = "records";
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  bool quiet = false;
  auto* bench = app.add_subcommand("bench", "Compare both searches over every *.pgm/*.png below a directory");
  bench->add_option("dir", input, "Image directory (searched recursively)")->required();
  bench->add_option("--format", format, "csv, markdown or json")
      ->check(CLI::IsMember({"csv", "markdown", "json"}))
      ->capture_default_str();
  bench->add_option("--table", table, "CSV table: records, efficiency, accuracy or category")
      ->check(CLI::IsMember({"records", "efficiency", "accuracy", "category"}))
      ->capture_default_str();
  bench->add_option("--categories", categories_path, "CSV map image,category for the per-category table");
  bench->add_option("-o,--output", output, "Write the report to file instead of stdout");
  bench->add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  bench->add_flag("-q,--quiet", quiet, "Suppress progress on stderr");
  search_flags.attach(bench);

  // check-unimodal
  auto* unimodal = app.add_subcommand("check-unimodal", "Report local maxima of the variance profile");
  unimodal->add_option("image", input, "Input PGM/PNG")->required();

  // root-demo
  double a = 2.0, b = 3.0, tol = 1e-6;
  int max_iter = 60;
  std::string root_format = "table";
  auto* root = app.add_subcommand("root-demo", "Bisection root finding on f(x) = e^x - 3x - 2");
  root->add_option("--a", a, "Left bracket end")->capture_default_str();
  root->add_option("--b", b, "Right bracket end")->capture_default_str();
  root->add_option("--tol", tol, "Tolerance on half-width and |f(c)|")->capture_default_str();
  root->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
  root->add_option("--format", root_format, "table or csv")->check(CLI::IsMember({"table", "csv"}))->capture_default_str();

  // synth
  BimodalSpec spec;
  std::size_t width = 512, height = 512;
  std::vector<int> two_delta;
  auto* synth = app.add_subcommand("synth", "Write a seeded synthetic bimodal (or two-level) PGM");
  synth->add_option("-o,--output", output, "Output PGM")->required();
  synth->add_option("--mean0", spec.mean0)->capture_default_str();
  synth->add_option("--mean1", spec.mean1)->capture_default_str();
  synth->add_option("--sigma0", spec.sigma0)->capture_default_str();
  synth->add_option("--sigma1", spec.sigma1)->capture_default_str();
  synth->add_option("--mix", spec.mix, "Weight of the darker mode")->capture_default_str();
  synth->add_option("--width", width)->capture_default_str();
  synth->add_option("--height", height)->capture_default_str();
  synth->add_option("--seed", spec.seed, "Histogram seed; the pixel shuffle uses seed+1")->capture_default_str();
  synth->add_option("--two-delta", two_delta, "Half the pixels at a, half at b")->delimiter(',')->expected(2);
  synth->add_flag("--ascii", ascii, "Write plain (P2) PGM");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help arrives as CallForHelp from the subcommand parser.
    if (e.get_exit_code() == 0) {
      const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
      out << sub->help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (hist->parsed()) {
      const auto h = compute_histogram(load_image_file(input));
      emit(output, out, [&](std::ostream& o) { write_histogram_csv(h, o); });
    } else if (profile->parsed()) {
      const MomentTable m(compute_histogram(load_image_file(input)));
      VarianceEvaluator ev(m);
      const auto p = ev.full_profile();
      emit(output, out, [&](std::ostream& o) { write_profile_csv(p, o); });
    } else if (threshold->parsed()) {
      const auto cfg = search_flags.config();
      const auto image = load_image_file(input);
      const MomentTable m(compute_histogram(image));
      VarianceEvaluator ev(m);
      ThresholdResult result;
      SearchTrace search_trace;
      if (method == "exhaustive") {
        result = exhaustive_otsu(ev);
      } else {
        auto outcome = bisection_otsu(ev, cfg);
        result = outcome.result;
        search_trace = std::move(outcome.trace);
      }
      out << to_json(result).dump() << '\n';
      if (trace) out << render_trace_jsonl(search_trace);
      if (!mask_path.empty()) {
        const auto pol = polarity == "fg-white" ? MaskPolarity::ForegroundWhite : MaskPolarity::ForegroundBlack;
        emit(mask_path, out, [&](std::ostream& o) {
          write_binary_mask(image, Threshold(result.threshold), o, pol, ascii ? PgmEncoding::Ascii : PgmEncoding::Binary);
        });
      }
    } else if (compare_cmd->parsed()) {
      const auto cfg = search_flags.config();
      const auto record = compare(load_image_file(input), cfg, fs::path(input).filename().string());
      if (format == "json")
        out << to_json(record).dump(2) << '\n';
      else
        out << render_records_csv({record});
    } else if (bench->parsed()) {
      const auto cfg = search_flags.config();
      std::map<std::string, std::string> category_of;
      if (!categories_path.empty()) category_of = read_category_map(categories_path);
      if (table == "category" && categories_path.empty()) throw UsageError("--table category requires --categories");

      const auto files = discover_images(input);
      if (files.empty()) {
        err << "error: no *.pgm or *.png files under " << input << '\n';
        return kExitDomainError;
      }

      std::vector<std::optional<ComparisonRecord>> slots(files.size());
      std::vector<std::string> failures(files.size());
      std::atomic<std::size_t> next{0};
      std::atomic<std::size_t> done{0};
      std::mutex progress;
      auto worker = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++) {
          try {
            slots[i] = compare(load_image_file((fs::path(input) / files[i]).string()), cfg, files[i]);
          } catch (const std::exception& e) {
            failures[i] = e.what();
          }
          const auto finished = ++done;
          if (!quiet) {
            std::lock_guard lock(progress);
            err << "[" << finished << "/" << files.size() << "] " << files[i] << '\n';
          }
        }
      };
      std::vector<std::thread> pool;
      const unsigned workers = std::min<unsigned>(jobs, static_cast<unsigned>(files.size()));
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
      for (auto& t : pool) t.join();

      std::vector<ComparisonRecord> records;
      for (std::size_t i = 0; i < files.size(); ++i) {
        if (slots[i])
          records.push_back(std::move(*slots[i]));
        else
          err << "skipped " << files[i] << ": " << failures[i] << '\n';
      }
      if (records.empty()) {
        err << "error: no image produced a comparison record\n";
        return kExitDomainError;
      }
      const auto stats = aggregate(records);
      std::vector<CategoryStats> cats;
      if (!category_of.empty()) cats = aggregate_by_category(records, category_of);

      std::string report;
      const auto fmt = parse_format(format);
      if (fmt == ReportFormat::Csv && table == "efficiency")
        report = render_efficiency_csv(stats);
      else if (fmt == ReportFormat::Csv && table == "accuracy")
        report = render_accuracy_csv(stats);
      else if (fmt == ReportFormat::Csv && table == "category")
        report = render_category_csv(cats);
      else
        report = render_report(stats, records, fmt, cats);
      emit(output, out, [&](std::ostream& o) { o << report; });
    } else if (unimodal->parsed()) {
      const MomentTable m(compute_histogram(load_image_file(input)));
      VarianceEvaluator ev(m);
      out << to_json(check_unimodal(ev.full_profile())).dump(2) << '\n';
    } else if (root->parsed()) {
      const auto result = bisect_root(transcendental, a, b, tol, max_iter);
      if (root_format == "csv") {
        out << "iteration,a,b,c,f_c,new_a,new_b\n";
        char buf[256];
        for (std::size_t k = 0; k < result.bracket_history.size(); ++k) {
          const auto& s = result.bracket_history[k];
          std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", k + 1, s.a, s.b, s.c, s.fc,
                        s.next_a, s.next_b);
          out << buf;
        }
      } else {
        char buf[160];
        out << "f(x) = e^x - 3x - 2\n";
        std::snprintf(buf, sizeof buf, "f(%.3f) = %.3f\nf(%.3f) = %.3f\n\n", a, transcendental(a), b, transcendental(b));
        out << buf;
        out << "| Iteration | a | b | c = (a+b)/2 | f(c) | New Interval |\n|---|---|---|---|---|---|\n";
        for (std::size_t k = 0; k < result.bracket_history.size(); ++k)
          out << root_table_row(result.bracket_history[k], static_cast<int>(k + 1)) << '\n';
        std::snprintf(buf, sizeof buf, "\nroot = %.9f after %d iterations, f(root) = %.3e\n", result.root,
                      result.iterations, transcendental(result.root));
        out << buf;
      }
    } else if (synth->parsed()) {
      Histogram h = [&] {
        if (!two_delta.empty()) return two_delta_histogram(two_delta[0], two_delta[1], width * height);
        spec.total = width * height;
        return bimodal_histogram(spec);
      }();
      const auto image = image_from_histogram(h, width, height, spec.seed + 1);
      write_pgm_file(image, output, ascii ? PgmEncoding::Ascii : PgmEncoding::Binary);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidConfig& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace otsubis::cli
