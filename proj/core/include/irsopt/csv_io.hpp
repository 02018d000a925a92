#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "irsopt/simulator.hpp"

namespace irsopt {

// CSV writers. Column orders are fixed; numbers use "%.12g" so identical
// inputs give byte-identical files.

std::string format_number(double value);

/// t,k,Q_bits,D_s,A_bar_bits,d_s,p_W
void write_state_trace(std::ostream& out, const RunMetrics& metrics);

/// t,total_power_W,total_power_dBm,objective,iterations,converged
void write_slot_trace(std::ostream& out, const RunMetrics& metrics);

/// controller,runs,mean_power_W,mean_power_dBm,std_power_W,mean_Dqueue,mean_delay_s
void write_summary(std::ostream& out, std::span<const BatchRow> rows);

/// axis,controller,mean_power_W,std_power_W,mean_Dqueue,mean_delay_s,runs
/// where `axis` holds the swept value.
void write_sweep_table(std::ostream& out, std::span<const SweepRow> rows);

/// <axis name>,<controller 1>,<controller 2>,... with mean_power_W per cell,
/// one line per swept value in input order.
void write_plot_data(std::ostream& out, SweepAxis axis, std::span<const SweepRow> rows);

struct ConvergenceSeries {
  std::string label;
  std::vector<double> objective;
};

/// series,iteration,objective
void write_convergence(std::ostream& out, std::span<const ConvergenceSeries> series);

/// slot,kind,row,col,re,im with kind "d" (direct, row = device) or "c"
/// (cascaded, row = element, col = device); values in hexadecimal floating
/// point so a replay reproduces every bit.
void write_channel_trace(std::ostream& out, std::span<const ChannelSlot> slots);
std::vector<ChannelSlot> read_channel_trace(std::istream& in);

}  // namespace irsopt
