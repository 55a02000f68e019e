#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "solar3d/baselines.hpp"
#include "solar3d/geometry.hpp"
#include "solar3d/guards.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace solar3d::search {

struct SearchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Proposal {
    std::string geometry;
    std::map<std::string, double> params;
    std::string proposer_id;
    std::size_t parent = 0;  // candidate index of the mutated parent, 0 = none
};

// Bounded history summary sent to proposers each iteration.
struct ProposerRequest {
    std::size_t iteration = 1;  // 1-based
    double best_score_wh = 0.0;
    std::string best_geometry;
    double last_score_wh = 0.0;
    std::string last_guard_violation;
    double area_cap_m2 = 0.0;
    BoundingBox box;

    nlohmann::json to_json() const {
        return {{"iteration", iteration},
                {"best_score_wh", best_score_wh},
                {"best_geometry", best_geometry},
                {"last_score_wh", last_score_wh},
                {"last_guard_violation", last_guard_violation},
                {"area_cap_m2", area_cap_m2},
                {"box", {box.x_max, box.y_max, box.z_max}}};
    }
};

struct CandidateRecord {
    std::size_t index = 0;  // 1-based
    double score_wh = 0.0;
    std::string violation;  // first failed rule, or ""
    std::string digest;     // content hash of the geometry text
    std::size_t parent = 0;
    double ts = 0.0;        // wall-clock epoch seconds; 0 when no clock is injected

    bool operator==(const CandidateRecord&) const = default;
};

struct SearchLedger {
    std::vector<CandidateRecord> records;
    std::string config_digest;
    std::uint64_t seed = 0;
    std::size_t best_index = 0;  // 1-based; 0 when every candidate scored 0

    bool operator==(const SearchLedger&) const = default;
};

inline std::string fnv1a_digest(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

class Proposer {
public:
    virtual ~Proposer() = default;
    virtual Proposal propose(const ProposerRequest& request) = 0;
};

namespace detail {

struct ParamSpec {
    const char* name;
    double lo, hi;
    bool integer = false;
};

struct FamilySpec {
    const char* name;
    std::vector<ParamSpec> params;
};

inline const std::vector<FamilySpec>& families() {
    static const std::vector<FamilySpec> kFamilies{
        {"flat", {{"s", 5, 20}}},
        {"open-cube", {{"s", 4, 20}, {"h", 1, 10}}},
        {"high-table", {{"s", 5, 20}, {"h", 1, 10}, {"width", 5, 20}}},
        {"sawtooth",
         {{"s", 5, 20}, {"z_lo", 0.5, 4}, {"z_hi", 4.5, 10}, {"teeth", 1, 4, true},
          {"rise_fraction", 0.55, 0.9}}},
        {"cavity-fin", {{"s", 5, 20}, {"h", 1, 10}}},
        {"tilted-waffle",
         {{"s", 10, 20}, {"walls", 3, 11, true}, {"partitions", 3, 13, true}, {"tilt", 10, 30},
          {"wall_height", 1, 9}, {"partition_height", 1, 9}}},
    };
    return kFamilies;
}

}  // namespace detail

// Stochastic stand-in for the LLM proposer: epsilon-greedy over baseline
// families, Gaussian mutation of the best candidate's parameters.
class BuiltinProposer : public Proposer {
public:
    explicit BuiltinProposer(std::uint64_t seed, double epsilon = 0.2)
        : rng_(seed), epsilon_(epsilon) {}

    Proposal propose(const ProposerRequest& request) override {
        // Promote the previous proposal if the harness scored it best.
        if (last_ && request.iteration > 1 && request.last_score_wh > best_score_) {
            best_score_ = request.last_score_wh;
            best_ = last_;
            best_index_ = request.iteration - 1;
        }
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        State next;
        std::size_t parent = 0;
        if (!best_ || coin(rng_) < epsilon_) {
            next = sample_fresh();
        } else {
            next = mutate(*best_);
            parent = best_index_;
        }
        last_ = next;
        Proposal p;
        p.proposer_id = "builtin";
        p.parent = parent;
        p.params = next.params;
        p.geometry = serialize_geometry(baselines::generate(next.family, next.params));
        return p;
    }

private:
    struct State {
        std::string family;
        std::map<std::string, double> params;
    };

    State sample_fresh() {
        const auto& fams = detail::families();
        std::uniform_int_distribution<std::size_t> pick(0, fams.size() - 1);
        const auto& fam = fams[pick(rng_)];
        State s;
        s.family = fam.name;
        for (const auto& spec : fam.params) {
            std::uniform_real_distribution<double> dist(spec.lo, spec.hi);
            double v = dist(rng_);
            if (spec.integer) v = std::round(v);
            s.params[spec.name] = v;
        }
        return s;
    }

    State mutate(const State& base) {
        const auto& fams = detail::families();
        const detail::FamilySpec* fam = nullptr;
        for (const auto& f : fams) {
            if (base.family == f.name) fam = &f;
        }
        State s = base;
        for (const auto& spec : fam->params) {
            std::normal_distribution<double> noise(0.0, 0.1 * (spec.hi - spec.lo));
            double v = base.params.at(spec.name) + noise(rng_);
            v = std::clamp(v, spec.lo, spec.hi);
            if (spec.integer) v = std::round(v);
            s.params[spec.name] = v;
        }
        return s;
    }

    std::mt19937_64 rng_;
    double epsilon_;
    std::optional<State> best_;
    std::optional<State> last_;
    std::size_t best_index_ = 0;
    double best_score_ = 0.0;
};

// Child process speaking one JSON request line in, one JSON response
// line ({"geometry": "<floats>"}) out, per iteration.
class ExternalProposer : public Proposer {
public:
    explicit ExternalProposer(std::string command, double timeout_seconds = 120.0)
        : command_(std::move(command)), timeout_seconds_(timeout_seconds) {}

    ~ExternalProposer() override { shutdown(); }

    ExternalProposer(const ExternalProposer&) = delete;
    ExternalProposer& operator=(const ExternalProposer&) = delete;

    Proposal propose(const ProposerRequest& request) override {
        if (pid_ < 0) spawn();
        const std::string line = request.to_json().dump() + "\n";
        if (!write_all(line)) throw SearchError("proposer pipe closed while writing request");
        const std::string reply = read_line();
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(reply);
        } catch (const nlohmann::json::exception& e) {
            throw SearchError(std::string("proposer returned invalid JSON: ") + e.what());
        }
        if (!j.contains("geometry") || !j.at("geometry").is_string()) {
            throw SearchError("proposer response lacks a \"geometry\" string");
        }
        Proposal p;
        p.proposer_id = "exec";
        p.geometry = j.at("geometry").get<std::string>();
        return p;
    }

private:
    void spawn() {
        int to_child[2], from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0) {
            throw SearchError("failed to create proposer pipes");
        }
        pid_ = fork();
        if (pid_ < 0) throw SearchError("failed to fork proposer process");
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        in_fd_ = to_child[1];
        out_fd_ = from_child[0];
        signal(SIGPIPE, SIG_IGN);
    }

    void shutdown() {
        if (in_fd_ >= 0) close(in_fd_);
        if (out_fd_ >= 0) close(out_fd_);
        if (pid_ > 0) {
            kill(pid_, SIGTERM);
            int status = 0;
            waitpid(pid_, &status, 0);
        }
        pid_ = -1;
        in_fd_ = out_fd_ = -1;
    }

    bool write_all(const std::string& data) {
        std::size_t off = 0;
        while (off < data.size()) {
            const ssize_t n = ::write(in_fd_, data.data() + off, data.size() - off);
            if (n <= 0) return false;
            off += static_cast<std::size_t>(n);
        }
        return true;
    }

    std::string read_line() {
        const int timeout_ms = static_cast<int>(timeout_seconds_ * 1000.0);
        while (true) {
            const auto nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                std::string line = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                return line;
            }
            pollfd pfd{out_fd_, POLLIN, 0};
            const int rc = poll(&pfd, 1, timeout_ms);
            if (rc == 0) throw SearchError("proposer timed out");
            if (rc < 0) throw SearchError("poll failed on proposer pipe");
            char chunk[4096];
            const ssize_t n = ::read(out_fd_, chunk, sizeof(chunk));
            if (n <= 0) throw SearchError("proposer pipe closed");
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

    std::string command_;
    double timeout_seconds_;
    pid_t pid_ = -1;
    int in_fd_ = -1;
    int out_fd_ = -1;
    std::string buffer_;
};

using Clock = std::function<double()>;  // epoch seconds; null = deterministic zeros

// Sequential propose-and-score loop with feedback. Zero-score proposals
// never abort the run; 20 consecutive proposer failures do.
inline SearchLedger run_search(Proposer& proposer, std::size_t budget, const SimConfig& sim_cfg,
                               const GuardConfig& guard_cfg, std::uint64_t seed,
                               const Clock& clock = {},
                               const std::function<void(const CandidateRecord&)>& on_record = {}) {
    if (budget < 1) throw SearchError("budget must be at least 1");
    SearchLedger ledger;
    ledger.seed = seed;
    {
        std::ostringstream cfg;
        cfg << sim_cfg.site.latitude << '|' << sim_cfg.site.longitude << '|'
            << sim_cfg.step_minutes << '|' << sim_cfg.subcell_target_area << '|'
            << guard_cfg.area_cap << '|' << guard_cfg.box.x_max << '|' << guard_cfg.box.y_max
            << '|' << guard_cfg.box.z_max << '|' << seed;
        ledger.config_digest = fnv1a_digest(cfg.str());
    }
    double best_score = 0.0;
    std::string best_geometry;
    std::string last_violation;
    double last_score = 0.0;
    int consecutive_failures = 0;
    for (std::size_t i = 1; i <= budget; ++i) {
        ProposerRequest req;
        req.iteration = i;
        req.best_score_wh = best_score;
        req.best_geometry = best_geometry;
        req.last_score_wh = last_score;
        req.last_guard_violation = last_violation;
        req.area_cap_m2 = guard_cfg.area_cap;
        req.box = guard_cfg.box;

        CandidateRecord rec;
        rec.index = i;
        rec.ts = clock ? clock() : 0.0;
        std::string geometry;
        try {
            Proposal p = proposer.propose(req);
            geometry = std::move(p.geometry);
            rec.parent = p.parent;
            consecutive_failures = 0;
        } catch (const std::exception& e) {
            ++consecutive_failures;
            rec.violation = std::string("proposer: ") + e.what();
            rec.digest = fnv1a_digest("");
            ledger.records.push_back(rec);
            if (on_record) on_record(rec);
            last_score = 0.0;
            last_violation = rec.violation;
            if (consecutive_failures >= 20) break;  // partial ledger
            continue;
        }
        rec.digest = fnv1a_digest(geometry);
        const ScoreResult scored = score(geometry, sim_cfg, guard_cfg);
        rec.score_wh = scored.score_wh;
        if (!scored.report.violations.empty()) {
            rec.violation = scored.report.violations.front().rule + ": " +
                            scored.report.violations.front().detail;
        }
        if (rec.score_wh > best_score) {
            best_score = rec.score_wh;
            best_geometry = geometry;
            ledger.best_index = i;
        }
        last_score = rec.score_wh;
        last_violation = rec.violation;
        ledger.records.push_back(rec);
        if (on_record) on_record(rec);
    }
    return ledger;
}

inline nlohmann::json record_to_json(const CandidateRecord& r) {
    return {{"i", r.index},       {"score_wh", r.score_wh}, {"digest", r.digest},
            {"parent", r.parent}, {"violation", r.violation}, {"ts", r.ts}};
}

inline void save_ledger(const SearchLedger& ledger, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SearchError("cannot open ledger file " + path);
    out << nlohmann::json{{"type", "run"},
                          {"config_digest", ledger.config_digest},
                          {"seed", ledger.seed},
                          {"best", ledger.best_index}}
               .dump()
        << '\n';
    for (const CandidateRecord& r : ledger.records) out << record_to_json(r).dump() << '\n';
}

inline SearchLedger load_ledger(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SearchError("cannot open ledger file " + path);
    SearchLedger ledger;
    std::string line;
    std::size_t line_no = 0;
    double running_best = 0.0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception&) {
            throw SearchError("corrupt ledger line " + std::to_string(line_no) + " in " + path);
        }
        try {
            if (line_no == 1 && j.value("type", "") == "run") {
                ledger.config_digest = j.at("config_digest").get<std::string>();
                ledger.seed = j.at("seed").get<std::uint64_t>();
                ledger.best_index = j.at("best").get<std::size_t>();
                continue;
            }
            CandidateRecord r;
            r.index = j.at("i").get<std::size_t>();
            r.score_wh = j.at("score_wh").get<double>();
            r.digest = j.at("digest").get<std::string>();
            r.parent = j.at("parent").get<std::size_t>();
            r.violation = j.at("violation").get<std::string>();
            r.ts = j.at("ts").get<double>();
            if (!ledger.records.empty() && r.index <= ledger.records.back().index) {
                throw SearchError("candidate indices not strictly increasing");
            }
            running_best = std::max(running_best, r.score_wh);
            ledger.records.push_back(r);
        } catch (const nlohmann::json::exception&) {
            throw SearchError("corrupt ledger line " + std::to_string(line_no) + " in " + path);
        }
    }
    (void)running_best;  // monotone by construction of the running max
    return ledger;
}

}  // namespace solar3d::search
