#include "irsopt/csv_io.hpp"

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace irsopt {

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

namespace {

std::string hex(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", value);
  return buf;
}

double dbm_or_nan(double watts) { return watts > 0.0 ? watts_to_dbm(watts) : -std::numeric_limits<double>::infinity(); }

}  // namespace

void write_state_trace(std::ostream& out, const RunMetrics& m) {
  out << "t,k,Q_bits,D_s,A_bar_bits,d_s,p_W\n";
  for (int t = 0; t < m.horizon; ++t)
    for (int k = 0; k < m.num_devices; ++k)
      out << (t + 1) << ',' << k << ',' << format_number(m.at(m.backlog, t, k)) << ','
          << format_number(m.at(m.delay_backlog, t, k)) << ',' << format_number(m.at(m.avg_arrival, t, k)) << ','
          << format_number(m.at(m.delay, t, k)) << ',' << format_number(m.at(m.transmit_power, t, k)) << '\n';
}

void write_slot_trace(std::ostream& out, const RunMetrics& m) {
  out << "t,total_power_W,total_power_dBm,objective,iterations,converged\n";
  for (int t = 0; t < m.horizon; ++t) {
    const auto i = static_cast<std::size_t>(t);
    out << (t + 1) << ',' << format_number(m.total_power[i]) << ',' << format_number(dbm_or_nan(m.total_power[i])) << ','
        << format_number(m.objective[i]) << ',' << m.iterations[i] << ',' << (m.converged[i] ? 1 : 0) << '\n';
  }
}

void write_summary(std::ostream& out, std::span<const BatchRow> rows) {
  out << "controller,runs,mean_power_W,mean_power_dBm,std_power_W,mean_Dqueue,mean_delay_s\n";
  for (const auto& r : rows)
    out << to_string(r.controller) << ',' << r.runs << ',' << format_number(r.mean_power_w) << ','
        << format_number(dbm_or_nan(r.mean_power_w)) << ',' << format_number(r.std_power_w) << ','
        << format_number(r.mean_dqueue) << ',' << format_number(r.mean_delay_s) << '\n';
}

void write_sweep_table(std::ostream& out, std::span<const SweepRow> rows) {
  out << "axis,controller,mean_power_W,std_power_W,mean_Dqueue,mean_delay_s,runs\n";
  for (const auto& r : rows)
    out << format_number(r.value) << ',' << to_string(r.batch.controller) << ',' << format_number(r.batch.mean_power_w)
        << ',' << format_number(r.batch.std_power_w) << ',' << format_number(r.batch.mean_dqueue) << ','
        << format_number(r.batch.mean_delay_s) << ',' << r.batch.runs << '\n';
}

void write_plot_data(std::ostream& out, SweepAxis axis, std::span<const SweepRow> rows) {
  std::vector<ControllerKind> controllers;
  std::vector<double> values;
  for (const auto& r : rows) {
    if (std::find(controllers.begin(), controllers.end(), r.batch.controller) == controllers.end())
      controllers.push_back(r.batch.controller);
    if (std::find(values.begin(), values.end(), r.value) == values.end()) values.push_back(r.value);
  }
  out << to_string(axis);
  for (auto c : controllers) out << ',' << to_string(c);
  out << '\n';
  for (double v : values) {
    out << format_number(v);
    for (auto c : controllers) {
      out << ',';
      for (const auto& r : rows)
        if (r.value == v && r.batch.controller == c) out << format_number(r.batch.mean_power_w);
    }
    out << '\n';
  }
}

void write_convergence(std::ostream& out, std::span<const ConvergenceSeries> series) {
  out << "series,iteration,objective\n";
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.objective.size(); ++i)
      out << s.label << ',' << i << ',' << format_number(s.objective[i]) << '\n';
}

void write_channel_trace(std::ostream& out, std::span<const ChannelSlot> slots) {
  out << "slot,kind,row,col,re,im\n";
  for (const auto& s : slots) {
    for (Eigen::Index k = 0; k < s.direct.size(); ++k)
      out << s.slot << ",d," << k << ",0," << hex(s.direct(k).real()) << ',' << hex(s.direct(k).imag()) << '\n';
    for (Eigen::Index k = 0; k < s.cascaded.cols(); ++k)
      for (Eigen::Index n = 0; n < s.cascaded.rows(); ++n)
        out << s.slot << ",c," << n << ',' << k << ',' << hex(s.cascaded(n, k).real()) << ','
            << hex(s.cascaded(n, k).imag()) << '\n';
  }
}

std::vector<ChannelSlot> read_channel_trace(std::istream& in) {
  struct Entry {
    char kind;
    Eigen::Index row, col;
    cdouble value;
  };
  std::map<std::int64_t, std::vector<Entry>> by_slot;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("channel trace line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "slot,kind,row,col,re,im") fail("unexpected header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6 || (cells[1] != "d" && cells[1] != "c")) fail("malformed record");
    try {
      by_slot[std::stoll(cells[0])].push_back(
          {cells[1][0], std::stol(cells[2]), std::stol(cells[3]), {std::strtod(cells[4].c_str(), nullptr), std::strtod(cells[5].c_str(), nullptr)}});
    } catch (const std::logic_error&) {
      fail("malformed number");
    }
  }

  std::vector<ChannelSlot> slots;
  for (auto& [slot, entries] : by_slot) {
    Eigen::Index devices = 0, elements = 0;
    for (const auto& e : entries) {
      if (e.kind == 'd') devices = std::max(devices, e.row + 1);
      else {
        elements = std::max(elements, e.row + 1);
        devices = std::max(devices, e.col + 1);
      }
    }
    ChannelSlot s;
    s.slot = slot;
    s.direct = CVector::Zero(devices);
    s.cascaded = CMatrix::Zero(elements, devices);
    for (const auto& e : entries) {
      if (e.kind == 'd') s.direct(e.row) = e.value;
      else s.cascaded(e.row, e.col) = e.value;
    }
    slots.push_back(std::move(s));
  }
  return slots;
}

}  // namespace irsopt
