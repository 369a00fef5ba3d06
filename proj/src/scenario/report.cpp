// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/scenario/scenarios.hpp>

namespace routee::scenario {

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::defended: return "defended";
    case Verdict::vulnerable: return "vulnerable";
    case Verdict::error: return "error";
    }
    return "error";
}

nlohmann::json ScenarioReport::to_json() const
{
    nlohmann::json j;
    j["scenario"] = id;
    j["seed"] = seed;
    j["verdict"] = std::string(to_string(verdict));
    j["steps"] = steps;
    j["deltas"] = deltas;
    j["metrics"] = metrics;
    if (!error.empty()) j["error"] = error;
    return j;
}

std::vector<std::string> scenario_ids() { return {"fake-deposit", "fake-deposit-naive", "abort-economics", "message-abuse"}; }

ScenarioReport run_scenario(std::string_view id, uint64_t seed)
{
    try {
        if (id == "fake-deposit") return scenario_fake_deposit(seed, false);
        if (id == "fake-deposit-naive") return scenario_fake_deposit(seed, true);
        if (id == "abort-economics") return scenario_abort_economics(seed);
        if (id == "message-abuse") return scenario_message_abuse(seed);
    } catch (const std::exception& e) {
        ScenarioReport r;
        r.id = std::string(id);
        r.seed = seed;
        r.verdict = Verdict::error;
        r.error = e.what();
        return r;
    }
    throw std::invalid_argument("unknown scenario: " + std::string(id));
}

NaiveSettlement naive_oldest_first(const hub::Hub& hub, const Address& pay_to, Amount amount)
{
    std::vector<hub::OwnedDeposit> owned = hub.state().owned;
    std::stable_sort(owned.begin(), owned.end(),
                     [](const hub::OwnedDeposit& a, const hub::OwnedDeposit& b) { return a.source_height < b.source_height; });
    NaiveSettlement out;
    Amount sum = 0;
    for (const hub::OwnedDeposit& d : owned) {
        out.inputs.push_back(d);
        sum += d.value;
        out.tx_fee = formula_size(out.inputs.size(), 2) * hub.fee_avg();
        if (sum >= amount + out.tx_fee) break;
    }
    if (out.inputs.empty() || sum < amount + out.tx_fee) throw std::runtime_error("naive builder: deposits do not cover amount");

    Transaction& tx = out.transaction;
    for (const hub::OwnedDeposit& d : out.inputs) tx.inputs.push_back(TxIn{d.outpoint, d.value, {}});
    tx.outputs.push_back(TxOut{amount, pay_to});
    out.change = sum - amount - out.tx_fee;
    out.change_address = out.inputs.front().manager_address;
    tx.outputs.push_back(TxOut{out.change, out.change_address});

    std::vector<const crypto::KeyPair*> keys;
    for (const hub::OwnedDeposit& d : out.inputs) {
        const crypto::KeyPair* k = hub.manager_key(d.manager_address);
        if (!k) throw std::runtime_error("naive builder: manager key missing");
        keys.push_back(k);
    }
    sign_inputs(tx, keys);
    return out;
}

} // namespace routee::scenario
