# Copyright 2026 The iotid Authors
# SPDX-License-Identifier: Apache-2.0

import hashlib
import os
import stat

import pytest

import iotid


def test_did_round_trip():
    assert iotid.parse_did("did:example:1234AbxfgHufgh") == ("example", "1234AbxfgHufgh")
    assert iotid.format_did("sov", "abc123") == "did:sov:abc123"
    with pytest.raises(iotid.IotidError) as err:
        iotid.parse_did("did::")
    assert err.value.code == "MalformedDid"


def test_keys_and_addresses():
    seed = bytes(32)
    pk = iotid.public_key(seed)
    assert pk.hex() == "3b6a27bcceb6a42d62a3a8d02a6f0d73653215771de243a63ac048a18b59da29"
    assert iotid.derive_address(pk) == "0x" + hashlib.sha256(pk).hexdigest()[:40]
    sig = iotid.sign(seed, b"hello")
    assert iotid.verify(pk, b"hello", sig)
    assert not iotid.verify(pk, b"hellp", sig)
    assert iotid.content_hash(b"abc") == hashlib.sha256(b"abc").hexdigest()


def test_sim_run_writes_files(tmp_path):
    out = iotid.sim_run(devices=2, duration=90, out=str(tmp_path / "nodered"))
    assert out["files"] == 6
    assert sorted(os.listdir(tmp_path / "nodered")) == ["device1", "device2"]


def test_ledger_workflow(tmp_path):
    c = iotid.Client(str(tmp_path / "ledger"), str(tmp_path / "keys"), now=1000, random_seed=1)
    assert c.network_init(seed=4)["height"] == 1
    key = c.keygen("dev", seed=4, index=1)
    assert "seed" not in key
    assert stat.S_IMODE(os.stat(tmp_path / "keys" / "dev.json").st_mode) == 0o600
    reg = c.register("dev", "ABCDEF00001")
    assert [t["flag"] for t in reg["transactions"]] == ["VALID", "VALID"]
    c.login("dev")

    payload = tmp_path / "1.txt"
    payload.write_bytes(b'{"d":{"temperature":1}}')
    up = c.upload("dev", str(payload))
    assert up["dataId"] == hashlib.sha256(payload.read_bytes()).hexdigest()
    with pytest.raises(iotid.IotidError) as err:
        c.upload("dev", str(payload))
    assert err.value.code == "DuplicateAsset"
    assert err.value.subject == up["dataId"]

    assert c.list_assets()["count"] == 1
    assert c.list_assets(mine="dev")["count"] == 1
    assert c.resolve(key["did"])["publicKey"] == key["publicKey"]

    c.advance(3600)
    with pytest.raises(iotid.IotidError) as err:
        c.list_assets(mine="dev")
    assert err.value.code == "NotAuthenticated"
    assert c.chain_verify()["ok"] is True


def test_bench_metrics(tmp_path):
    c = iotid.Client(str(tmp_path / "ledger"), str(tmp_path / "keys"), now=0, random_seed=2)
    c.network_init(seed=2)
    r = c.bench(count=20, seed=2)
    assert r["committedTxCount"] == 20
    assert r["throughputTxPerSec"] > 0
    lat = r["latencyMs"]
    assert lat["min"] <= lat["mean"] <= lat["p95"]


def test_scenario_is_deterministic(tmp_path):
    a = iotid.run_scenario(str(tmp_path / "a"), devices=2, duration=120, seed=5)
    b = iotid.run_scenario(str(tmp_path / "b"), devices=2, duration=120, seed=5)
    assert a == b
    assert a["ok"] is True
    assert a["uploaded"] == 8
    assert a["duplicatesRejected"] == 2
