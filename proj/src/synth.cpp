#include "ids/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "ids/error.hpp"
#include "ids/rng.hpp"

namespace ids::synth {

namespace {

struct WeightedName {
    const char* name;
    double weight;
};

const char* pick(Rng& rng, std::initializer_list<WeightedName> choices) {
    double total = 0.0;
    for (const auto& c : choices) total += c.weight;
    double u = rng.next_double() * total;
    for (const auto& c : choices) {
        u -= c.weight;
        if (u <= 0.0) return c.name;
    }
    return choices.begin()->name;
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// share of flood/scan rows emitted as the concentrated "core" mode;
// the remainder forms the diffuse shell
constexpr double kNeptuneCoreShare = 0.32;
constexpr double kProbeCoreShare = 0.75;

long long lognormal_int(Rng& rng, double mu, double sigma, long long cap) {
    const double v = std::exp(mu + sigma * rng.next_normal());
    return std::min(cap, static_cast<long long>(std::llround(v)));
}

long long uniform_int(Rng& rng, long long lo, long long hi) {
    return lo + static_cast<long long>(rng.next_below(static_cast<std::uint64_t>(hi - lo + 1)));
}

double uniform(Rng& rng, double lo, double hi) { return rng.next_double(lo, hi); }

bool chance(Rng& rng, double p) { return rng.next_double() < p; }

// One connection record in schema order. Rate-valued features are
// rounded to two decimals at output, like the dataset files.
struct Row {
    long long duration = 0;
    const char* proto = "tcp";
    const char* service = "http";
    const char* flag = "SF";
    long long src_bytes = 0;
    long long dst_bytes = 0;
    int land = 0;
    int wrong_fragment = 0;
    int urgent = 0;
    long long hot = 0;
    long long num_failed_logins = 0;
    int logged_in = 0;
    long long num_compromised = 0;
    int root_shell = 0;
    int su_attempted = 0;
    long long num_root = 0;
    long long num_file_creations = 0;
    long long num_shells = 0;
    long long num_access_files = 0;
    long long num_outbound_cmds = 0;
    int is_host_login = 0;
    int is_guest_login = 0;
    long long count = 1;
    long long srv_count = 1;
    double serror_rate = 0, srv_serror_rate = 0;
    double rerror_rate = 0, srv_rerror_rate = 0;
    double same_srv_rate = 1, diff_srv_rate = 0, srv_diff_host_rate = 0;
    long long dst_host_count = 1, dst_host_srv_count = 1;
    double dst_host_same_srv_rate = 1, dst_host_diff_srv_rate = 0;
    double dst_host_same_src_port_rate = 0, dst_host_srv_diff_host_rate = 0;
    double dst_host_serror_rate = 0, dst_host_srv_serror_rate = 0;
    double dst_host_rerror_rate = 0, dst_host_srv_rerror_rate = 0;
};

void append_row(std::string& out, const Row& r, const char* label, int difficulty) {
    char buf[640];
    std::snprintf(
        buf, sizeof(buf),
        "%lld,%s,%s,%s,%lld,%lld,%d,%d,%d,%lld,%lld,%d,%lld,%d,%d,%lld,%lld,%lld,%lld,%lld,"
        "%d,%d,%lld,%lld,%.2f,%.2f,%.2f,%.2f,%.2f,%.2f,%.2f,%lld,%lld,%.2f,%.2f,%.2f,%.2f,"
        "%.2f,%.2f,%.2f,%.2f,%s,%d\n",
        r.duration, r.proto, r.service, r.flag, r.src_bytes, r.dst_bytes, r.land,
        r.wrong_fragment, r.urgent, r.hot, r.num_failed_logins, r.logged_in, r.num_compromised,
        r.root_shell, r.su_attempted, r.num_root, r.num_file_creations, r.num_shells,
        r.num_access_files, r.num_outbound_cmds, r.is_host_login, r.is_guest_login, r.count,
        r.srv_count, clamp01(r.serror_rate), clamp01(r.srv_serror_rate), clamp01(r.rerror_rate),
        clamp01(r.srv_rerror_rate), clamp01(r.same_srv_rate), clamp01(r.diff_srv_rate),
        clamp01(r.srv_diff_host_rate), r.dst_host_count, r.dst_host_srv_count,
        clamp01(r.dst_host_same_srv_rate), clamp01(r.dst_host_diff_srv_rate),
        clamp01(r.dst_host_same_src_port_rate), clamp01(r.dst_host_srv_diff_host_rate),
        clamp01(r.dst_host_serror_rate), clamp01(r.dst_host_srv_serror_rate),
        clamp01(r.dst_host_rerror_rate), clamp01(r.dst_host_srv_rerror_rate), label, difficulty);
    out += buf;
}

void fill_host_mirror(Rng& rng, Row& r) {
    r.dst_host_serror_rate = clamp01(r.serror_rate * uniform(rng, 0.5, 1.0) +
                                     std::abs(rng.next_normal()) * 0.08);
    r.dst_host_srv_serror_rate = clamp01(r.srv_serror_rate * uniform(rng, 0.5, 1.0) +
                                         std::abs(rng.next_normal()) * 0.08);
    r.dst_host_rerror_rate = clamp01(r.rerror_rate * uniform(rng, 0.5, 1.0) +
                                     std::abs(rng.next_normal()) * 0.08);
    r.dst_host_srv_rerror_rate = clamp01(r.srv_rerror_rate * uniform(rng, 0.5, 1.0) +
                                         std::abs(rng.next_normal()) * 0.08);
    r.dst_host_same_srv_rate = clamp01(r.same_srv_rate * uniform(rng, 0.7, 1.0) +
                                       std::abs(rng.next_normal()) * 0.1);
    r.dst_host_diff_srv_rate = clamp01(r.diff_srv_rate * uniform(rng, 0.6, 1.0) +
                                       std::abs(rng.next_normal()) * 0.06);
}

// Per-service traffic shape for benign tcp flows; bytes and duration
// correlate with the service so the volume features form their own
// covariance block.
struct ServiceShape {
    const char* name;
    double weight;
    double src_mu, src_sigma;
    double dst_mu, dst_sigma;
    double duration_mu;  // < 0: almost always zero duration
};

constexpr ServiceShape kTcpServices[] = {
    {"http", 50, 5.4, 1.6, 7.4, 2.0, -1.0},
    {"smtp", 10, 6.2, 1.4, 5.6, 1.5, -1.0},
    {"private", 8, 4.0, 1.8, 3.5, 2.0, -1.0},
    {"ftp_data", 8, 7.8, 2.2, 0.0, 0.0, 0.8},
    {"other", 4, 4.5, 2.0, 4.0, 2.1, 0.5},
    {"telnet", 3, 5.5, 1.5, 6.8, 1.7, 3.2},
    {"ftp", 3, 4.6, 1.3, 4.9, 1.4, 2.4},
    {"finger", 3, 3.0, 1.0, 4.2, 1.1, -1.0},
    {"pop_3", 3, 4.3, 1.1, 5.2, 1.2, -1.0},
    {"imap4", 2, 4.4, 1.2, 5.4, 1.3, -1.0},
    {"auth", 2, 3.2, 0.9, 3.4, 1.0, -1.0},
    {"domain", 1, 3.7, 1.1, 4.3, 1.2, -1.0},
    {"ssh", 1, 5.0, 1.4, 5.8, 1.5, 2.0},
};

Row normal_row(Rng& rng, bool test) {
    Row r;
    r.proto = pick(rng, {{"tcp", test ? 76.0 : 79.0}, {"udp", test ? 20.0 : 18.0},
                         {"icmp", test ? 4.0 : 3.0}});
    if (r.proto == std::string("tcp")) {
        double total = 0.0;
        for (const auto& s : kTcpServices) total += s.weight;
        double u = rng.next_double() * total;
        const ServiceShape* shape = &kTcpServices[0];
        for (const auto& s : kTcpServices) {
            u -= s.weight;
            if (u <= 0.0) {
                shape = &s;
                break;
            }
        }
        r.service = shape->name;
        if (test && chance(rng, 0.001)) r.service = "aol";  // unseen in training
        r.flag = pick(rng, {{"SF", 93}, {"REJ", 3}, {"RSTO", 2.5}, {"RSTR", 1.5}});
        const double session = 0.9 * rng.next_normal();
        r.src_bytes = lognormal_int(rng, shape->src_mu + session, shape->src_sigma, 1300000000);
        r.dst_bytes = shape->dst_mu > 0.0
                          ? lognormal_int(rng, shape->dst_mu + session, shape->dst_sigma,
                                          1300000000)
                          : 0;
        if (chance(rng, test ? 0.006 : 0.015)) r.src_bytes = lognormal_int(rng, 13.0, 2.0, 1300000000);
        if (chance(rng, test ? 0.006 : 0.015)) r.dst_bytes = lognormal_int(rng, 13.5, 2.0, 1300000000);
        r.duration = shape->duration_mu > 0.0 && chance(rng, 0.7)
                         ? lognormal_int(rng, shape->duration_mu, 1.6, 42908)
                         : (chance(rng, test ? 0.09 : 0.15) ? lognormal_int(rng, 4.0, 2.0, 42908) : 0);
        r.logged_in = (r.dst_bytes > 0 && chance(rng, 0.8)) ? 1 : 0;
    } else if (r.proto == std::string("udp")) {
        r.service = pick(rng, {{"domain_u", 70}, {"private", 18}, {"ntp_u", 8}, {"other", 4}});
        r.flag = "SF";
        r.src_bytes = uniform_int(rng, 20, 160);
        r.dst_bytes = chance(rng, 0.8) ? uniform_int(rng, 20, 300) : 0;
        r.duration = chance(rng, 0.9) ? 0 : uniform_int(rng, 1, 5);
    } else {
        r.service = pick(rng, {{"eco_i", 50}, {"ecr_i", 30}, {"tim_i", 10}, {"urp_i", 10}});
        r.flag = "SF";
        r.src_bytes = uniform_int(rng, 8, 40);
        r.dst_bytes = 0;
    }
    if (chance(rng, 0.0005)) r.urgent = 1;
    if (chance(rng, 0.04)) r.hot = uniform_int(rng, 1, 2);
    if (chance(rng, 0.005)) r.num_failed_logins = 1;
    if (chance(rng, 0.005)) r.num_compromised = uniform_int(rng, 1, 3);
    r.num_root = chance(rng, 0.004) ? r.num_compromised : 0;
    if (chance(rng, 0.002)) r.root_shell = 1;
    if (chance(rng, 0.01)) r.num_file_creations = uniform_int(rng, 1, 2);
    if (chance(rng, 0.003)) r.num_shells = 1;
    if (chance(rng, 0.01)) r.num_access_files = 1;
    if (chance(rng, 0.03)) r.is_guest_login = 1;

    r.count = 1 + lognormal_int(rng, 1.2, test ? 1.35 : 1.5, 500);
    r.srv_count = std::max(1ll, static_cast<long long>(
                                    std::llround(static_cast<double>(r.count) *
                               uniform(rng, 0.3, 1.0))));
    r.same_srv_rate = clamp01(static_cast<double>(r.srv_count) / static_cast<double>(r.count) +
                              rng.next_normal() * 0.05);
    r.diff_srv_rate = clamp01((1.0 - r.same_srv_rate) * uniform(rng, 0.2, 0.8));
    r.serror_rate = chance(rng, 0.96) ? 0.0 : uniform(rng, 0.0, 0.2);
    r.srv_serror_rate = clamp01(r.serror_rate * uniform(rng, 0.6, 1.0) + std::abs(rng.next_normal()) * 0.05);
    r.rerror_rate = chance(rng, test ? 0.92 : 0.94) ? 0.0 : uniform(rng, 0.0, 0.3);
    r.srv_rerror_rate = clamp01(r.rerror_rate * uniform(rng, 0.6, 1.0) + std::abs(rng.next_normal()) * 0.05);
    r.srv_diff_host_rate = chance(rng, 0.6) ? 0.0 : uniform(rng, 0.0, 0.25);
    r.dst_host_count = std::min(255ll, 1 + lognormal_int(rng, 3.5, 1.3, 255));
    if (r.service == std::string("http"))
        r.dst_host_srv_count = std::min(255ll, static_cast<long long>(std::llround(
                                                   static_cast<double>(r.dst_host_count) *
                                                   uniform(rng, 0.7, 1.0))));
    else
        r.dst_host_srv_count = uniform_int(rng, 1, std::max(1ll, r.dst_host_count / 2));
    fill_host_mirror(rng, r);
    r.dst_host_same_src_port_rate =
        r.dst_host_count < 10 ? uniform(rng, 0.3, 1.0) : uniform(rng, 0.0, 0.12);
    r.dst_host_srv_diff_host_rate = clamp01(std::abs(rng.next_normal()) * 0.06);

    // benign-but-odd slices: transient outages, busy services and
    // harmless rejected scans. Each covers one attack-signature
    // marginal; only feature conjunctions stay attack-specific.
    const double slice = rng.next_double();
    if (slice < 0.13) {
        // flaky: connections timing out
        r.flag = chance(rng, 0.7) ? "S0" : "REJ";
        r.src_bytes = 0;
        r.dst_bytes = 0;
        r.logged_in = 0;
        r.duration = 0;
        r.count = uniform_int(rng, 1, 8);
        r.srv_count = uniform_int(rng, 1, (long long)r.count);
        r.serror_rate = uniform(rng, 0.25, 1.0);
        r.srv_serror_rate = clamp01(r.serror_rate + rng.next_normal() * 0.05);
        r.same_srv_rate = clamp01(static_cast<double>(r.srv_count) / static_cast<double>(r.count) +
                                  rng.next_normal() * 0.05);
        fill_host_mirror(rng, r);
    } else if (slice < 0.17) {
        // busy host: many connections to one popular service
        r.count = uniform_int(rng, 80, 511);
        r.srv_count = std::max(1ll, r.count - uniform_int(rng, 0, 10));
        r.same_srv_rate = uniform(rng, 0.9, 1.0);
        r.diff_srv_rate = uniform(rng, 0.0, 0.05);
        r.serror_rate = 0.0;
        r.srv_serror_rate = 0.0;
        r.dst_host_count = 255;
        r.dst_host_srv_count = uniform_int(rng, 200, 255);
        fill_host_mirror(rng, r);
    } else if (slice < 0.21) {
        // refused connections without any sweep pattern
        r.flag = "REJ";
        r.src_bytes = 0;
        r.dst_bytes = 0;
        r.logged_in = 0;
        r.count = uniform_int(rng, 1, 6);
        r.rerror_rate = uniform(rng, 0.2, 1.0);
        r.srv_rerror_rate = clamp01(r.rerror_rate + rng.next_normal() * 0.05);
        r.diff_srv_rate = clamp01(std::abs(rng.next_normal()) * 0.2);
        fill_host_mirror(rng, r);
    } else if (slice < 0.27) {
        // congested burst: retries raise the error rates while the
        // destination host itself stays healthy
        r.count = uniform_int(rng, 15, 120);
        r.srv_count = std::max(1ll, static_cast<long long>(r.count * uniform(rng, 0.7, 1.0)));
        r.same_srv_rate = clamp01(static_cast<double>(r.srv_count) / static_cast<double>(r.count) +
                                  rng.next_normal() * 0.03);
        r.diff_srv_rate = clamp01((1.0 - r.same_srv_rate) * uniform(rng, 0.2, 0.8));
        r.serror_rate = uniform(rng, 0.1, 0.45);
        r.srv_serror_rate = clamp01(r.serror_rate * uniform(rng, 0.7, 1.0) +
                                    std::abs(rng.next_normal()) * 0.03);
        r.rerror_rate = 0.0;
        r.srv_rerror_rate = 0.0;
        r.dst_host_serror_rate = uniform(rng, 0.0, 0.06);
        r.dst_host_srv_serror_rate = uniform(rng, 0.0, 0.06);
        r.dst_host_rerror_rate = uniform(rng, 0.0, 0.05);
        r.dst_host_srv_rerror_rate = uniform(rng, 0.0, 0.05);
    } else if (slice < 0.33) {
        // client hopping across services on one host
        r.count = uniform_int(rng, 2, 40);
        r.same_srv_rate = uniform(rng, 0.2, 0.9);
        r.srv_count = std::max(1ll, static_cast<long long>(r.count * r.same_srv_rate));
        r.diff_srv_rate = clamp01((1.0 - r.same_srv_rate) * uniform(rng, 0.3, 0.9));
        r.srv_diff_host_rate = uniform(rng, 0.0, 0.4);
        fill_host_mirror(rng, r);
    }
    return r;
}

Row dos_row(Rng& rng, const std::string& attack, bool test) {
    Row r;
    if (attack == "neptune") {
        r.proto = "tcp";
        r.service = pick(rng, {{"private", 45}, {"telnet", 12}, {"http", 8}, {"ftp", 5},
                               {"smtp", 5}, {"finger", 5}, {"domain", 4}, {"auth", 4},
                               {"pop_3", 4}, {"imap4", 4}, {"other", 4}});
        if (chance(rng, kNeptuneCoreShare)) {
            // hot flood core
            r.flag = pick(rng, {{"S0", 95}, {"REJ", 4}, {"RSTO", 1}});
            r.count = test ? uniform_int(rng, 160, 320) : uniform_int(rng, 170, 300);
            r.srv_count = std::max(1ll, static_cast<long long>(r.count * uniform(rng, 0.02, 0.1)));
            r.serror_rate = uniform(rng, 0.92, 1.0);
            r.same_srv_rate = uniform(rng, 0.0, 0.25);
            r.diff_srv_rate = uniform(rng, 0.03, 0.15);
            r.dst_host_count = uniform_int(rng, 180, 255);
            r.dst_host_srv_count = uniform_int(rng, 2, 40);
            fill_host_mirror(rng, r);
            r.dst_host_serror_rate = uniform(rng, 0.7, 1.0);
            r.dst_host_srv_serror_rate = uniform(rng, 0.7, 1.0);
        } else {
            // slow shell: every marginal overlaps some benign slice,
            // only the conjunction is distinctive
            r.flag = pick(rng, {{"S0", 70}, {"REJ", 20}, {"SF", 10}});
            r.count = uniform_int(rng, 15, 120);
            r.same_srv_rate = uniform(rng, 0.5, 0.95);
            r.srv_count = std::max(1ll, static_cast<long long>(r.count * r.same_srv_rate));
            r.serror_rate = uniform(rng, 0.15, 0.45);
            r.diff_srv_rate = uniform(rng, 0.02, 0.2);
            r.dst_host_count = uniform_int(rng, 40, 200);
            r.dst_host_srv_count = uniform_int(rng, 5, 60);
            fill_host_mirror(rng, r);
            r.dst_host_serror_rate = uniform(rng, 0.12, 0.5);
            r.dst_host_srv_serror_rate = uniform(rng, 0.12, 0.5);
        }
        r.srv_serror_rate = clamp01(r.serror_rate * uniform(rng, 0.7, 1.0) +
                                    std::abs(rng.next_normal()) * 0.05);
    } else if (attack == "smurf") {
        r.proto = "icmp";
        r.service = "ecr_i";
        r.src_bytes = std::atoll(
            test ? pick(rng, {{"520", 40}, {"1032", 40}, {"1480", 20}})
                 : pick(rng, {{"520", 50}, {"1032", 50}}));
        r.count = test ? uniform_int(rng, 460, 511) : uniform_int(rng, 480, 511);
        r.srv_count = r.count;
        r.dst_host_count = 255;
        r.dst_host_srv_count = 255;
        r.dst_host_same_src_port_rate = uniform(rng, 0.5, 1.0);
    } else if (attack == "back") {
        r.service = "http";
        r.flag = pick(rng, {{"SF", 90}, {"RSTR", 10}});
        r.duration = uniform_int(rng, 0, 4);
        r.src_bytes = 54540 + uniform_int(rng, -60, 60);
        r.dst_bytes = 8314 + uniform_int(rng, -2000, 2000);
        r.logged_in = 1;
        r.hot = 2;
        r.count = uniform_int(rng, 1, 5);
        r.srv_count = r.count;
        r.dst_host_count = 255;
        r.dst_host_srv_count = 255;
    } else if (attack == "teardrop") {
        r.proto = "udp";
        r.service = "private";
        r.wrong_fragment = chance(rng, 0.9) ? 3 : 1;
        r.src_bytes = 28;
        r.count = uniform_int(rng, 4, 120);
        r.srv_count = r.count;
        r.dst_host_same_src_port_rate = uniform(rng, 0.8, 1.0);
    } else if (attack == "pod") {
        r.proto = "icmp";
        r.service = "ecr_i";
        r.wrong_fragment = 1;
        r.src_bytes = 1480;
        r.count = uniform_int(rng, 1, 20);
        r.srv_count = r.count;
    } else if (attack == "land") {
        r.land = 1;
        r.service = pick(rng, {{"finger", 50}, {"telnet", 50}});
        r.flag = pick(rng, {{"S0", 70}, {"SF", 30}});
        r.serror_rate = uniform(rng, 0.5, 1.0);
        r.srv_serror_rate = r.serror_rate;
    } else if (attack == "apache2") {
        r.service = "http";
        if (chance(rng, 0.6)) {
            // oversized-request flood, close to the trained back profile
            r.flag = pick(rng, {{"SF", 80}, {"RSTR", 20}});
            r.duration = uniform_int(rng, 0, 6);
            r.src_bytes = 54540 + uniform_int(rng, -800, 800);
            r.dst_bytes = 8314 + uniform_int(rng, -2500, 2500);
            r.logged_in = 1;
            r.hot = 2;
            r.count = uniform_int(rng, 1, 8);
            r.srv_count = r.count;
            r.dst_host_count = 255;
            r.dst_host_srv_count = 255;
        } else {
            r.flag = pick(rng, {{"SF", 60}, {"RSTR", 30}, {"RSTO", 10}});
            r.duration = uniform_int(rng, 0, 150);
            r.src_bytes = lognormal_int(rng, 7.3, 0.5, 100000);
            r.dst_bytes = chance(rng, 0.5) ? uniform_int(rng, 0, 2000) : 0;
            r.count = uniform_int(rng, 2, 60);
            r.srv_count = std::max(1ll, r.count - uniform_int(rng, 0, 2));
            r.dst_host_count = 255;
            r.dst_host_srv_count = 255;
        }
    } else if (attack == "processtable") {
        r.service = pick(rng, {{"telnet", 60}, {"smtp", 25}, {"finger", 15}});
        r.flag = pick(rng, {{"SF", 85}, {"S0", 10}, {"RSTO", 5}});
        r.duration = uniform_int(rng, 0, 1000);
        r.count = uniform_int(rng, 100, 450);
        r.srv_count = std::max(1ll, r.count - uniform_int(rng, 0, 10));
        r.same_srv_rate = uniform(rng, 0.9, 1.0);
        r.diff_srv_rate = uniform(rng, 0.0, 0.05);
        r.serror_rate = uniform(rng, 0.0, 0.1);
        r.srv_serror_rate = r.serror_rate;
        r.dst_host_count = 255;
        r.dst_host_srv_count = uniform_int(rng, 200, 255);
    } else if (attack == "mailbomb") {
        r.service = "smtp";
        r.src_bytes = uniform_int(rng, 200, 4000);
        r.dst_bytes = uniform_int(rng, 200, 400);
        r.logged_in = chance(rng, 0.5) ? 1 : 0;
        r.count = uniform_int(rng, 80, 300);
        r.srv_count = r.count;
    } else if (attack == "udpstorm") {
        r.proto = "udp";
        r.service = "other";
        r.src_bytes = uniform_int(rng, 20, 100);
        r.count = 511;
        r.srv_count = 511;
    }
    if (r.dst_host_count == 1) {
        r.dst_host_count = 255;
        r.dst_host_srv_count = std::min(255ll, r.srv_count);
        fill_host_mirror(rng, r);
    }
    return r;
}

Row probe_row(Rng& rng, const std::string& attack, bool test) {
    Row r;
    r.duration = 0;
    if (attack == "satan" || attack == "saint") {
        const bool saint = attack == "saint";
        r.proto = pick(rng, {{"tcp", 80}, {"udp", 20}});
        r.service = pick(rng, {{"private", 30}, {"whois", 10}, {"other", 10}, {"http", 5},
                               {"telnet", 5}, {"ftp", 5}, {"smtp", 5}, {"domain", 5},
                               {"finger", 5}, {"mtp", 5}, {"netbios_ns", 5}, {"sql_net", 5},
                               {"uucp", 5}, {"csnet_ns", 5}});
        r.flag = pick(rng, {{"REJ", 35}, {"S0", 20}, {"SF", saint ? 40.0 : 35.0}, {"RSTR", 10}});
        r.src_bytes = chance(rng, 0.6) ? 0 : uniform_int(rng, 1, saint ? 300 : 50);
        if (chance(rng, kProbeCoreShare)) {
            r.count = uniform_int(rng, 1, 15);
            r.srv_count = uniform_int(rng, 1, 6);
            r.serror_rate = uniform(rng, 0.1, 0.5);
            r.rerror_rate = saint ? uniform(rng, 0.2, 0.9) : uniform(rng, 0.3, 0.8);
            r.same_srv_rate = uniform(rng, 0.05, 0.3);
            r.diff_srv_rate = saint ? uniform(rng, 0.3, 0.9) : uniform(rng, 0.4, 1.0);
            r.srv_diff_host_rate = uniform(rng, 0.3, 0.8);
        } else {
            // slow scan shell
            r.count = uniform_int(rng, 2, 25);
            r.same_srv_rate = uniform(rng, 0.4, 0.9);
            r.srv_count = std::max(1ll, static_cast<long long>(r.count * r.same_srv_rate));
            r.serror_rate = uniform(rng, 0.0, 0.12);
            r.rerror_rate = uniform(rng, 0.1, 0.35);
            r.diff_srv_rate = clamp01((1.0 - r.same_srv_rate) * uniform(rng, 0.3, 0.9));
            r.srv_diff_host_rate = uniform(rng, 0.0, 0.3);
            r.dst_host_count = uniform_int(rng, 30, 200);
            r.dst_host_srv_count = uniform_int(rng, 5, 80);
            fill_host_mirror(rng, r);
            r.dst_host_same_src_port_rate = uniform(rng, 0.0, 0.2);
            (void)test;
            return r;
        }
    } else if (attack == "ipsweep") {
        r.proto = "icmp";
        r.service = "eco_i";
        r.src_bytes = std::atoll(pick(rng, {{"8", 60}, {"18", 20}, {"20", 20}}));
        r.count = uniform_int(rng, 1, 5);
        r.srv_count = uniform_int(rng, 1, 3);
        r.srv_diff_host_rate = uniform(rng, 0.5, 1.0);
        r.dst_host_same_src_port_rate = uniform(rng, 0.4, 1.0);
    } else if (attack == "portsweep") {
        r.service = pick(rng, {{"private", 60}, {"other", 10}, {"http", 5}, {"telnet", 5},
                               {"ftp", 5}, {"smtp", 5}, {"domain", 5}, {"finger", 5}});
        r.flag = pick(rng, {{"REJ", 55}, {"S0", 20}, {"RSTR", 20}, {"SF", 5}});
        r.duration = chance(rng, 0.8) ? 0 : uniform_int(rng, 1, 4000);
        r.src_bytes = chance(rng, 0.7) ? 0 : uniform_int(rng, 1, 10);
        if (chance(rng, kProbeCoreShare)) {
            r.count = uniform_int(rng, 1, 6);
            r.srv_count = 1;
            r.rerror_rate = uniform(rng, 0.6, 1.0);
            r.serror_rate = uniform(rng, 0.0, 0.3);
            r.same_srv_rate = uniform(rng, 0.0, 0.1);
            r.diff_srv_rate = uniform(rng, 0.5, 1.0);
        } else {
            r.count = uniform_int(rng, 2, 25);
            r.same_srv_rate = uniform(rng, 0.4, 0.85);
            r.srv_count = std::max(1ll, static_cast<long long>(r.count * r.same_srv_rate));
            r.rerror_rate = uniform(rng, 0.1, 0.4);
            r.serror_rate = uniform(rng, 0.0, 0.1);
            r.diff_srv_rate = clamp01((1.0 - r.same_srv_rate) * uniform(rng, 0.3, 0.9));
            r.dst_host_count = uniform_int(rng, 30, 200);
            r.dst_host_srv_count = uniform_int(rng, 5, 80);
            fill_host_mirror(rng, r);
            r.dst_host_same_src_port_rate = uniform(rng, 0.0, 0.2);
            (void)test;
            return r;
        }
    } else if (attack == "nmap") {
        r.proto = pick(rng, {{"icmp", 50}, {"tcp", 30}, {"udp", 20}});
        r.service = r.proto == std::string("icmp")
                        ? pick(rng, {{"eco_i", 70}, {"ecr_i", 30}})
                        : pick(rng, {{"private", 70}, {"other", 30}});
        r.flag = pick(rng, {{"SF", 60}, {"REJ", 30}, {"S0", 10}});
        r.src_bytes = std::atoll(pick(rng, {{"0", 40}, {"8", 30}, {"24", 30}}));
        r.count = uniform_int(rng, 1, 4);
        r.rerror_rate = uniform(rng, 0.2, 0.6);
        r.diff_srv_rate = uniform(rng, 0.2, 0.7);
        r.dst_host_same_src_port_rate = uniform(rng, 0.5, 1.0);
    } else if (attack == "mscan") {
        r.proto = pick(rng, {{"tcp", 75}, {"udp", 25}});
        r.service = pick(rng, {{"private", 50}, {"other", 20}, {"http", 10}, {"telnet", 10},
                               {"domain", 10}});
        r.flag = pick(rng, {{"REJ", 50}, {"S0", 30}, {"SF", 20}});
        r.count = uniform_int(rng, 1, 30);
        r.srv_count = uniform_int(rng, 1, 5);
        r.rerror_rate = uniform(rng, 0.4, 1.0);
        r.serror_rate = uniform(rng, 0.1, 0.5);
        r.diff_srv_rate = uniform(rng, 0.6, 1.0);
        r.same_srv_rate = uniform(rng, 0.0, 0.15);
    }
    r.dst_host_count = attack == "ipsweep" ? uniform_int(rng, 1, 80) : 255;
    r.dst_host_srv_count = uniform_int(rng, 1, 30);
    fill_host_mirror(rng, r);
    (void)test;
    return r;
}

Row r2l_row(Rng& rng, const std::string& attack, bool test) {
    Row r = normal_row(rng, test);  // the point: near-normal transport behaviour
    r.urgent = 0;
    if (attack == "warezclient" || attack == "warezmaster") {
        r.proto = "tcp";
        r.service = pick(rng, {{"ftp_data", 70}, {"ftp", 30}});
        r.flag = "SF";
        r.duration = uniform_int(rng, 0, 600);
        if (attack == "warezclient") {
            r.src_bytes = uniform_int(rng, 100, 2000);
            r.dst_bytes = lognormal_int(rng, 12.0, 1.8, 100000000);
        } else {
            r.src_bytes = lognormal_int(rng, test ? 13.0 : 12.6, 1.6, 100000000);
            r.dst_bytes = uniform_int(rng, 0, 500);
        }
        r.logged_in = 1;
        r.is_guest_login = chance(rng, 0.7) ? 1 : 0;
        r.hot = chance(rng, 0.5) ? uniform_int(rng, 1, 30) : 0;
        r.count = uniform_int(rng, 1, 4);
        r.srv_count = r.count;
    } else if (attack == "guess_passwd") {
        r.proto = "tcp";
        r.service = pick(rng, {{"telnet", 40}, {"pop_3", 30}, {"ftp", 20}, {"imap4", 10}});
        r.flag = pick(rng, {{"SF", 85}, {"RSTO", 15}});
        r.duration = uniform_int(rng, 0, 6);
        r.src_bytes = uniform_int(rng, 90, 300);
        r.dst_bytes = uniform_int(rng, 180, 500);
        r.num_failed_logins = uniform_int(rng, 1, 5);
        r.logged_in = 0;
        r.hot = chance(rng, 0.2) ? 1 : 0;
        r.count = uniform_int(rng, 1, 4);
        r.srv_count = uniform_int(rng, 1, 4);
    } else if (attack == "snmpgetattack") {
        r.proto = "udp";
        r.service = "private";
        r.flag = "SF";
        r.duration = 0;
        r.src_bytes = uniform_int(rng, 80, 110);
        r.dst_bytes = uniform_int(rng, 80, 200);
        r.logged_in = 0;
        r.count = uniform_int(rng, 1, 3);
        r.srv_count = r.count;
    } else if (attack == "snmpguess") {
        r.proto = "udp";
        r.service = "private";
        r.flag = "SF";
        r.duration = 0;
        r.src_bytes = uniform_int(rng, 30, 50);
        r.dst_bytes = 0;
        r.count = uniform_int(rng, 1, 40);
        r.srv_count = r.count;
        r.dst_host_same_src_port_rate = uniform(rng, 0.5, 1.0);
    } else if (attack == "imap") {
        r.proto = "tcp";
        r.service = "imap4";
        r.flag = pick(rng, {{"RSTO", 50}, {"SF", 50}});
        r.src_bytes = uniform_int(rng, 0, 1500);
        r.dst_bytes = uniform_int(rng, 0, 400);
    } else {
        // ftp_write, multihop, phf, spy, named, sendmail, xlock,
        // xsnoop, worm: sparse near-normal flows with small oddities
        r.proto = "tcp";
        r.service = pick(rng, {{"telnet", 25}, {"http", 20}, {"smtp", 20}, {"ftp", 15},
                               {"other", 10}, {"domain", 10}});
        r.duration = uniform_int(rng, 0, 120);
        r.hot = chance(rng, 0.4) ? uniform_int(rng, 1, 4) : 0;
        r.num_compromised = chance(rng, 0.2) ? 1 : 0;
        r.count = uniform_int(rng, 1, 4);
        r.srv_count = uniform_int(rng, 1, 4);
    }
    return r;
}

Row u2r_row(Rng& rng, const std::string& attack, bool test) {
    Row r = normal_row(rng, test);
    r.proto = "tcp";
    if (attack == "httptunnel") {
        r.service = "http";
        r.flag = "SF";
        r.duration = uniform_int(rng, 1, 500);
        r.src_bytes = uniform_int(rng, 200, 10000);
        r.dst_bytes = uniform_int(rng, 500, 30000);
        r.logged_in = 1;
        r.count = uniform_int(rng, 1, 3);
        r.srv_count = r.count;
        return r;
    }
    r.service = pick(rng, {{"telnet", 60}, {"ftp", 20}, {"other", 20}});
    r.flag = "SF";
    r.duration = uniform_int(rng, 1, 321);
    r.src_bytes = uniform_int(rng, 100, 2500);
    r.dst_bytes = uniform_int(rng, 100, 7000);
    r.logged_in = 1;
    r.root_shell = chance(rng, 0.7) ? 1 : 0;
    r.su_attempted = chance(rng, 0.2) ? 1 : 0;
    r.hot = uniform_int(rng, 0, 3);
    r.num_root = chance(rng, 0.5) ? uniform_int(rng, 1, 5) : 0;
    r.num_file_creations = uniform_int(rng, 0, 2);
    r.count = uniform_int(rng, 1, 3);
    r.srv_count = r.count;
    return r;
}

struct AttackCount {
    const char* name;
    long long rows;
};

constexpr AttackCount kTrainDos[] = {{"neptune", 41214}, {"smurf", 2646},  {"back", 956},
                                     {"teardrop", 892},  {"pod", 201},     {"land", 18}};
constexpr AttackCount kTrainProbe[] = {{"satan", 3633}, {"ipsweep", 3599},
                                       {"portsweep", 2931}, {"nmap", 1493}};
constexpr AttackCount kTrainR2l[] = {{"warezclient", 890}, {"guess_passwd", 53},
                                     {"warezmaster", 20},  {"imap", 11},
                                     {"ftp_write", 8},     {"multihop", 7},
                                     {"phf", 4},           {"spy", 2}};
constexpr AttackCount kTrainU2r[] = {{"buffer_overflow", 30}, {"rootkit", 10},
                                     {"loadmodule", 9},       {"perl", 3}};

constexpr AttackCount kTestDos[] = {{"neptune", 4657}, {"apache2", 737}, {"processtable", 685},
                                    {"smurf", 665},    {"back", 359},    {"mailbomb", 293},
                                    {"pod", 41},       {"teardrop", 12}, {"land", 7},
                                    {"udpstorm", 2}};
constexpr AttackCount kTestProbe[] = {{"mscan", 996},     {"satan", 735}, {"saint", 319},
                                      {"portsweep", 157}, {"ipsweep", 141}, {"nmap", 73}};
constexpr AttackCount kTestR2l[] = {{"guess_passwd", 1231}, {"warezmaster", 944},
                                    {"snmpguess", 331},     {"snmpgetattack", 178},
                                    {"multihop", 18},       {"named", 17},
                                    {"sendmail", 14},       {"xlock", 9},
                                    {"xsnoop", 4},          {"ftp_write", 3},
                                    {"phf", 2},             {"worm", 2},
                                    {"imap", 1}};
constexpr AttackCount kTestU2r[] = {{"httptunnel", 133}, {"buffer_overflow", 20},
                                    {"ps", 15},          {"rootkit", 13},
                                    {"xterm", 13},       {"loadmodule", 2},
                                    {"perl", 2},         {"sqlattack", 2}};

constexpr long long kTrainNormal = 67343;
constexpr long long kTestNormal = 9711;

enum class Cat { normal, dos, r2l, u2r, probe };

struct Planned {
    Cat cat;
    const char* attack;  // null for normal
};

void write_split(const std::string& path, bool test, double scale, Rng& rng) {
    const auto scaled = [&](long long rows) {
        return std::max(1ll, static_cast<long long>(std::llround(scale * rows)));
    };
    std::vector<Planned> plan;
    const long long normals = scaled(test ? kTestNormal : kTrainNormal);
    for (long long i = 0; i < normals; ++i) plan.push_back({Cat::normal, nullptr});
    const auto add = [&](Cat cat, const AttackCount* begin, const AttackCount* end) {
        for (const auto* a = begin; a != end; ++a)
            for (long long i = 0, n = scaled(a->rows); i < n; ++i)
                plan.push_back({cat, a->name});
    };
    if (test) {
        add(Cat::dos, std::begin(kTestDos), std::end(kTestDos));
        add(Cat::probe, std::begin(kTestProbe), std::end(kTestProbe));
        add(Cat::r2l, std::begin(kTestR2l), std::end(kTestR2l));
        add(Cat::u2r, std::begin(kTestU2r), std::end(kTestU2r));
    } else {
        add(Cat::dos, std::begin(kTrainDos), std::end(kTrainDos));
        add(Cat::probe, std::begin(kTrainProbe), std::end(kTrainProbe));
        add(Cat::r2l, std::begin(kTrainR2l), std::end(kTrainR2l));
        add(Cat::u2r, std::begin(kTrainU2r), std::end(kTrainU2r));
    }
    rng.shuffle(plan);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    std::string buffer;
    buffer.reserve(1 << 20);
    for (const Planned& p : plan) {
        Row row;
        const char* label = "normal";
        switch (p.cat) {
            case Cat::normal: row = normal_row(rng, test); break;
            case Cat::dos: row = dos_row(rng, p.attack, test); label = p.attack; break;
            case Cat::probe: row = probe_row(rng, p.attack, test); label = p.attack; break;
            case Cat::r2l: row = r2l_row(rng, p.attack, test); label = p.attack; break;
            case Cat::u2r: row = u2r_row(rng, p.attack, test); label = p.attack; break;
        }
        append_row(buffer, row, label, static_cast<int>(uniform_int(rng, 15, 21)));
        if (buffer.size() > (1 << 20) - 1024) {
            out << buffer;
            buffer.clear();
        }
    }
    out << buffer;
    if (!out) throw ParseError("short write to '" + path + "'");
}

}  // namespace

void write_sample(const std::string& train_path, const std::string& test_path,
                  const Options& options) {
    Rng train_rng(seed_mix(options.seed, 1));
    write_split(train_path, false, options.scale, train_rng);
    Rng test_rng(seed_mix(options.seed, 2));
    write_split(test_path, true, options.scale, test_rng);
}

}  // namespace ids::synth
