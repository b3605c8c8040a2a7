#pragma once

#include <string>
#include <vector>

#include "alocc/metrics.hpp"
#include "alocc/train.hpp"

// CSV emitters. Schemas (v1, column order fixed):
//   train report:  epoch,d_loss,r_adv_loss,recon_loss
//   sample scores: sample_id,occ1_score,occ2_score,true_label
//   metrics:       fraction,mode,tau,f1,auc,eer,tp,fp,tn,fn

namespace alocc {

void write_train_report_csv(const std::string& path, const TrainReport& report);

void write_scores_csv(const std::string& path, const std::vector<float>& occ1,
                      const std::vector<float>& occ2, const std::vector<int>& true_labels);

void append_metrics_csv(const std::string& path, double fraction, const std::string& mode,
                        const MetricReport& report);

} // namespace alocc
