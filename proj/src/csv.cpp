#include "alocc/csv.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>

namespace alocc {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw FormatError("csv: cannot write " + path);
    out << std::setprecision(10);
    return out;
}

} // namespace

void write_train_report_csv(const std::string& path, const TrainReport& report) {
    std::ofstream out = open_out(path);
    out << "epoch,d_loss,r_adv_loss,recon_loss\n";
    for (const EpochRecord& e : report.epochs)
        out << e.epoch << "," << e.d_loss << "," << e.r_adv_loss << "," << e.recon_loss << "\n";
}

void write_scores_csv(const std::string& path, const std::vector<float>& occ1,
                      const std::vector<float>& occ2, const std::vector<int>& true_labels) {
    if (occ1.size() != occ2.size() || occ1.size() != true_labels.size())
        throw UsageError("scores csv: column lengths differ");
    std::ofstream out = open_out(path);
    out << "sample_id,occ1_score,occ2_score,true_label\n";
    for (size_t i = 0; i < occ1.size(); ++i)
        out << i << "," << occ1[i] << "," << occ2[i] << "," << true_labels[i] << "\n";
}

void append_metrics_csv(const std::string& path, double fraction, const std::string& mode,
                        const MetricReport& r) {
    const bool fresh = !std::filesystem::exists(path);
    std::ofstream out = open_out(path, std::ios::app);
    if (fresh) out << "fraction,mode,tau,f1,auc,eer,tp,fp,tn,fn\n";
    out << fraction << "," << mode << "," << r.tau << "," << r.f1 << "," << r.auc << "," << r.eer
        << "," << r.tp << "," << r.fp << "," << r.tn << "," << r.fn << "\n";
}

} // namespace alocc
