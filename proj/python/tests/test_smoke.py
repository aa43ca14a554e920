# Copyright 2026 The lmtkit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import csv
import io
import os
from fractions import Fraction
import math

import pytest

import lmtkit

MASK = (1 << 64) - 1


def fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h = ((h ^ b) * 0x100000001B3) & MASK
    return h


def below(seed, key, p):
    if p <= 0:
        return False
    if p >= 1:
        return True
    return fnv1a64(f"{seed}:{key}".encode()) < math.ceil(Fraction(p) * (1 << 64))


def test_registry_and_directions():
    reg = lmtkit.Registry.builtin()
    assert len(reg) == 60
    assert reg.tier_counts() == (13, 18, 29)
    assert reg.auxiliary_for("en", "kk") == "ru"
    assert reg.auxiliary_for("zh", "kk") == "en"
    assert reg.auxiliary_for("en", "zh") is None
    dirs = lmtkit.enumerate_directions()
    assert len(dirs) == 234
    assert len({frozenset(d) for d in dirs}) == 117


def test_hash_matches_pure_python():
    for data in [b"", b"a", b"foobar", "你好".encode()]:
        assert lmtkit.fnv1a64(data) == fnv1a64(data)
    assert lmtkit.seeded_hash(42, "abc") == fnv1a64(b"42:abc")


def test_downsample_matches_pure_python():
    xs = [lmtkit.DirectionalExample(f"s{i:05d}#fr2en", "fr", "en", "x", "y") for i in range(2000)]
    xs += [lmtkit.DirectionalExample(f"s{i:05d}#en2fr", "en", "fr", "y", "x") for i in range(100)]
    kept, counts = lmtkit.downsample(xs, p=0.05, seed=42)
    expected = {x.id for x in xs if x.src_lang == "en" or below(42, x.id, 0.05)}
    assert {x.id for x in kept} == expected
    assert counts["forward_kept"] == 100
    assert counts["reverse_kept"] + counts["reverse_dropped"] == 2000


def test_prompt_loss_slice():
    e = lmtkit.DirectionalExample("r#en2bg", "en", "bg", "Hello", "Здравейте")
    p = lmtkit.render_pmp(e, "Здравствуйте", "ru")
    assert p.format == "PMP"
    assert p.loss_slice() == "Здравейте".encode()
    cpt = lmtkit.render_cpt_bilingual(e)
    assert lmtkit.parse_cpt_bilingual(cpt.text) == ("en", "bg", "Hello", "Здравейте")


def test_mixture_and_repetition():
    records = [
        lmtkit.MultiWayRecord(f"m{i}", {"en": f"e{i}", "zh": f"z{i}", "kk": f"k{i}", "ru": f"r{i}"})
        for i in range(50)
    ]
    examples, stats, warnings = lmtkit.build_sft_mixture(records, {"per_direction_min": 0})
    by_dir = {s["direction"]: s for s in stats}
    assert by_dir["en2kk"]["stp"] + by_dir["en2kk"]["pmp"] == 50
    assert by_dir["ru2en"]["pmp"] == 0
    assert len(examples) == sum(s["retained"] for s in stats)

    pairs = []
    for r in records[:1]:
        pairs += lmtkit.expand(r)
    rep = lmtkit.target_repetition_stats(pairs)
    assert rep["max_repetition"] == 3


def test_filters_and_callable_backend():
    pairs = [
        lmtkit.DirectionalExample("a", "en", "fr", "same", "same"),
        lmtkit.DirectionalExample("b", "en", "fr", "hello there", "bonjour"),
    ]
    kept, report = lmtkit.apply_heuristics(pairs)
    assert [p.id for p in kept] == ["b"]
    assert '"src_tgt_distinct": 1' in report

    def backend(src, tgt, text):
        return text.upper()

    examples, attempted, failed = lmtkit.synth_direct([("m1", "en", "hi there")], backend, "en2kk")
    assert (attempted, failed) == (1, 0)
    assert examples[0].tgt == "HI THERE"
    assert examples[0].provenance == "synth_direct"


def test_eval_csv_parses_back():
    path = os.path.join(os.environ.get("LMTKIT_TEST_DATA", ""), "lmt60_flores_scores.jsonl")
    if not os.path.exists(path):
        pytest.skip("fixture not available")
    langs = {c.code for c in lmtkit.Registry.builtin().languages} - {"mn_cn"}
    with open(path, encoding="utf-8") as f:
        text = lmtkit.aggregate_table(f.read(), langs=langs, models=["LMT-60-4B"], format="csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert rows[0]["support"] == "59 (13/18/28)"
    assert abs(float(rows[0]["high_en2x"]) - 89.10) <= 0.005 + 1e-9
    assert abs(float(rows[0]["high_zh2x"]) - 86.85) <= 0.005 + 1e-9


def test_errors_carry_codes():
    with pytest.raises(lmtkit.LmtError) as info:
        lmtkit.render_stp(lmtkit.DirectionalExample("a", "en", "xx", "a", "b"))
    assert info.value.code == "UnknownLanguage"


def test_cli_in_process():
    code, out, _ = lmtkit.run_cli(["validate"])
    assert code == 0
    assert out == "60 languages, 234 directions\n"
    assert lmtkit.run_cli(["bogus"])[0] == 2
