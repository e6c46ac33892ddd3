// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <optional>
#include <string>

#include "iotid/commands.hpp"
#include "iotid/content_store.hpp"
#include "iotid/did.hpp"
#include "iotid/error.hpp"

namespace py = pybind11;
using iotid::gateway::json;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::bytes to_py_bytes(iotid::ByteView b) { return py::bytes(reinterpret_cast<const char*>(b.data()), b.size()); }

iotid::Bytes from_py_bytes(const py::bytes& b) {
    const std::string s = b;
    return iotid::Bytes(s.begin(), s.end());
}

iotid::KeySeed seed_from_py(const py::bytes& b) {
    const iotid::Bytes raw = from_py_bytes(b);
    if (raw.size() != 32) throw iotid::Error(iotid::ErrorCode::InvalidArgument, "seed must be 32 bytes");
    iotid::KeySeed s{};
    std::copy(raw.begin(), raw.end(), s.begin());
    return s;
}

/// One ledger and keystore pair driven through the command layer.
class Client {
  public:
    Client(std::filesystem::path ledger_dir, std::filesystem::path keystore_dir, std::optional<std::int64_t> now,
           std::optional<std::uint64_t> random_seed) {
        if (now) {
            sim_ = std::make_shared<iotid::SimClock>(*now);
            clock_ = sim_;
        } else {
            clock_ = std::make_shared<iotid::WallClock>();
        }
        ctx_.ledger_dir = std::move(ledger_dir);
        ctx_.keystore_dir = std::move(keystore_dir);
        ctx_.clock = clock_.get();
        ctx_.random = random_seed ? iotid::gateway::seeded_random_source(*random_seed)
                                  : iotid::gateway::os_random_source();
    }

    std::int64_t now() const { return clock_->now(); }

    void advance(std::int64_t seconds) {
        if (!sim_) throw iotid::Error(iotid::ErrorCode::InvalidArgument, "clock is not simulated");
        sim_->advance(seconds);
    }

    const iotid::gateway::CommandContext& ctx() const { return ctx_; }

  private:
    std::shared_ptr<iotid::Clock> clock_;
    std::shared_ptr<iotid::SimClock> sim_;
    iotid::gateway::CommandContext ctx_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Decentralized IoT identity ledger: DIDs, content store, permissioned ledger and gateway commands.";

    m.attr("IotidError") = py::reinterpret_steal<py::object>(
        PyErr_NewException("iotid._core.IotidError", PyExc_RuntimeError, nullptr));
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const iotid::Error& e) {
            py::object cls = py::module_::import("iotid._core").attr("IotidError");
            py::object err = cls(py::str(e.what()));
            err.attr("code") = std::string(iotid::to_string(e.code()));
            err.attr("subject") = e.subject();
            PyErr_SetObject(cls.ptr(), err.ptr());
        }
    });

    // -- identifiers and keys -------------------------------------------------

    m.def(
        "parse_did",
        [](const std::string& text) {
            const iotid::Did d = iotid::parse_did(text);
            return py::make_tuple(d.method, d.method_id);
        },
        py::arg("text"), "Splits `did:<method>:<id>` into (method, id).");
    m.def("format_did", [](const std::string& method, const std::string& id) {
        return iotid::format_did(iotid::Did{method, id});
    });
    m.def(
        "public_key",
        [](const py::bytes& seed) {
            const auto pk = iotid::generate_keypair(seed_from_py(seed)).public_key();
            return to_py_bytes(iotid::ByteView(pk.data(), pk.size()));
        },
        py::arg("seed"), "Ed25519 public key for a 32-byte seed.");
    m.def(
        "sign",
        [](const py::bytes& seed, const py::bytes& message) {
            return to_py_bytes(iotid::generate_keypair(seed_from_py(seed)).sign(from_py_bytes(message)));
        },
        py::arg("seed"), py::arg("message"));
    m.def(
        "verify",
        [](const py::bytes& public_key, const py::bytes& message, const py::bytes& signature) {
            const iotid::Bytes pk = from_py_bytes(public_key);
            if (pk.size() != 32) return false;
            iotid::PublicKey key{};
            std::copy(pk.begin(), pk.end(), key.begin());
            return iotid::verify_signature(key, from_py_bytes(message), from_py_bytes(signature));
        },
        py::arg("public_key"), py::arg("message"), py::arg("signature"));
    m.def(
        "derive_address",
        [](const py::bytes& public_key) {
            const iotid::Bytes pk = from_py_bytes(public_key);
            if (pk.size() != 32) throw iotid::Error(iotid::ErrorCode::InvalidArgument, "public key must be 32 bytes");
            iotid::PublicKey key{};
            std::copy(pk.begin(), pk.end(), key.begin());
            return iotid::derive_address(key).str();
        },
        py::arg("public_key"));
    m.def(
        "content_hash", [](const py::bytes& data) { return iotid::ContentHash::of(from_py_bytes(data)).hex(); },
        py::arg("data"), "Hex SHA-256 used as the content address.");

    // -- simulation and scenario ----------------------------------------------

    m.def(
        "sim_run",
        [](int devices, std::int64_t interval, double vmin, double vmax, const std::string& manufacturer,
           std::uint64_t seed, std::int64_t duration, const std::filesystem::path& out) {
            iotid::sim::FlowConfig cfg;
            cfg.device_count = devices;
            cfg.interval_seconds = interval;
            cfg.value_min = vmin;
            cfg.value_max = vmax;
            cfg.manufacturer_id = manufacturer;
            cfg.seed = seed;
            cfg.output_dir = out;
            return to_py(iotid::gateway::cmd_sim_run(cfg, duration));
        },
        py::arg("devices") = 5, py::arg("interval") = 30, py::arg("min") = 0.0, py::arg("max") = 100.0,
        py::arg("manufacturer") = "ABCDEF00001", py::arg("seed") = 0, py::arg("duration") = 300,
        py::arg("out") = std::filesystem::path("nodered"));

    m.def(
        "run_scenario",
        [](const std::filesystem::path& work_dir, int devices, std::int64_t interval, std::int64_t duration,
           std::uint64_t seed, bool force, bool timing) {
            iotid::gateway::ScenarioOptions opt;
            opt.work_dir = work_dir;
            opt.flow.device_count = devices;
            opt.flow.interval_seconds = interval;
            opt.flow.seed = seed;
            opt.duration_seconds = duration;
            opt.force = force;
            opt.timing = timing;
            json report;
            {
                py::gil_scoped_release release;
                report = iotid::gateway::run_scenario(opt);
            }
            return to_py(report);
        },
        py::arg("work_dir"), py::arg("devices") = 5, py::arg("interval") = 30, py::arg("duration") = 300,
        py::arg("seed") = 0, py::arg("force") = false, py::arg("timing") = false);

    // -- ledger-backed commands -----------------------------------------------

    namespace gw = iotid::gateway;
    py::class_<Client>(m, "Client")
        .def(py::init<std::filesystem::path, std::filesystem::path, std::optional<std::int64_t>,
                      std::optional<std::uint64_t>>(),
             py::arg("ledger_dir"), py::arg("keystore_dir"), py::arg("now") = py::none(),
             py::arg("random_seed") = py::none())
        .def_property_readonly("now", &Client::now)
        .def("advance", &Client::advance, py::arg("seconds"))
        .def(
            "network_init",
            [](const Client& c, std::uint64_t seed, bool force) {
                return to_py(gw::cmd_network_init(c.ctx(), std::nullopt, std::nullopt, seed, force));
            },
            py::arg("seed"), py::arg("force") = false)
        .def("chain_verify", [](const Client& c) { return to_py(gw::cmd_chain_verify(c.ctx())); })
        .def(
            "keygen",
            [](const Client& c, const std::string& name, std::optional<std::uint64_t> seed, std::optional<int> index) {
                std::optional<iotid::KeySeed> ks;
                if (seed) ks = gw::keygen_seed(*seed, name, index);
                return to_py(gw::cmd_device_keygen(c.ctx(), name, ks));
            },
            py::arg("name"), py::arg("seed") = py::none(), py::arg("index") = py::none())
        .def(
            "register",
            [](const Client& c, const std::string& name, const std::string& manufacturer, const std::string& registrar) {
                return to_py(gw::cmd_device_register(c.ctx(), name, manufacturer, registrar));
            },
            py::arg("name"), py::arg("manufacturer"), py::arg("registrar") = gw::kRegistrarKey)
        .def(
            "login", [](const Client& c, const std::string& name) { return to_py(gw::cmd_device_login(c.ctx(), name)); },
            py::arg("name"))
        .def(
            "transfer",
            [](const Client& c, const std::string& name, const std::string& to, const std::string& owner) {
                return to_py(gw::cmd_device_transfer(c.ctx(), name, to, owner));
            },
            py::arg("name"), py::arg("to"), py::arg("owner") = gw::kRegistrarKey)
        .def(
            "resolve", [](const Client& c, const std::string& did) { return to_py(gw::cmd_did_resolve(c.ctx(), did)); },
            py::arg("did"))
        .def(
            "upload",
            [](const Client& c, const std::string& name, const std::filesystem::path& file,
               std::optional<std::string> asset_name) {
                return to_py(gw::cmd_asset_upload(c.ctx(), name, file, asset_name));
            },
            py::arg("name"), py::arg("file"), py::arg("asset_name") = py::none())
        .def(
            "list_assets",
            [](const Client& c, std::optional<std::string> mine) { return to_py(gw::cmd_asset_list(c.ctx(), mine)); },
            py::arg("mine") = py::none())
        .def(
            "bench",
            [](const Client& c, std::size_t count, std::uint64_t seed) {
                json out;
                {
                    py::gil_scoped_release release;
                    out = gw::cmd_bench(c.ctx(), count, seed);
                }
                return to_py(out);
            },
            py::arg("count") = 200, py::arg("seed") = 0);
}
