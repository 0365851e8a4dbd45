import math
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laypress import metrics, textproc
from laypress.errors import EmptyCandidate, EmptyText
from laypress.metrics import (
    FamiliarWordList,
    default_familiar_words,
    dcrs,
    evaluate_summary,
    fkgl,
    rouge_lsum,
    rouge_n,
)

from oracles import rouge_oracle

texts = st.text(
    alphabet=st.sampled_from(list("abcdefg .!?\n")), min_size=0, max_size=120
)


class TestRougeN:
    def test_identity(self):
        score = rouge_n("The cat sat on the mat.", "The cat sat on the mat.", 1)
        assert score.f1 == 1.0

    def test_disjoint(self):
        assert rouge_n("alpha beta", "gamma delta", 1).f1 == 0.0

    def test_hand_counted_unigrams_and_bigrams(self):
        cand, ref = "the cat sat", "the cat ran"
        one = rouge_n(cand, ref, 1, stem=False)
        assert one.precision == pytest.approx(2 / 3, abs=1e-12)
        assert one.recall == pytest.approx(2 / 3, abs=1e-12)
        assert one.f1 == pytest.approx(2 / 3, abs=1e-12)
        two = rouge_n(cand, ref, 2, stem=False)
        assert two.precision == pytest.approx(1 / 2, abs=1e-12)
        assert two.f1 == pytest.approx(1 / 2, abs=1e-12)

    def test_empty_side_gives_zero(self):
        assert rouge_n("", "the cat", 1).f1 == 0.0
        assert rouge_n("the cat", "...", 2).f1 == 0.0

    def test_stemming_conflates_inflections(self):
        unstemmed = rouge_n("the running mice", "the runs mouse", 1, stem=False)
        stemmed = rouge_n("the running mice", "the runs mouse", 1, stem=True)
        assert stemmed.f1 > unstemmed.f1

    @given(texts, texts)
    @settings(max_examples=200, deadline=None)
    def test_swap_duality_and_bounds(self, a, b):
        for n in (1, 2):
            ab = rouge_n(a, b, n)
            ba = rouge_n(b, a, n)
            assert ab.precision == pytest.approx(ba.recall, abs=1e-12)
            assert ab.recall == pytest.approx(ba.precision, abs=1e-12)
            for value in (ab.precision, ab.recall, ab.f1):
                assert 0.0 <= value <= 1.0
            assert ab.f1 <= max(ab.precision, ab.recall) + 1e-12

    @given(texts, texts)
    @settings(max_examples=150, deadline=None)
    def test_matches_reference_oracle(self, a, b):
        for n in (1, 2):
            mine = rouge_n(a, b, n)
            precision, recall, f1 = rouge_oracle.score_rouge_n(a, b, n)
            assert mine.precision == pytest.approx(precision, abs=1e-12)
            assert mine.recall == pytest.approx(recall, abs=1e-12)
            assert mine.f1 == pytest.approx(f1, abs=1e-12)


class TestRougeLsum:
    def test_identity(self):
        text = "The cat sat.\nThe dog ran away."
        assert rouge_lsum(text, text).f1 == 1.0

    def test_hand_lcs_single_sentence(self):
        score = rouge_lsum("a b c d", "a c b d", stem=False)
        assert score.precision == pytest.approx(0.75, abs=1e-12)
        assert score.recall == pytest.approx(0.75, abs=1e-12)
        assert score.f1 == pytest.approx(0.75, abs=1e-12)

    def test_degenerate_candidate(self):
        score = rouge_lsum("", "some reference text.")
        assert (score.precision, score.recall, score.f1) == (0.0, 0.0, 0.0)

    def test_union_lcs_credits_each_token_once(self):
        # candidate repeats one reference sentence twice; hits are clipped
        ref = "the cat sat."
        cand = "the cat sat.\nthe cat sat."
        score = rouge_lsum(cand, ref, stem=False)
        assert score.recall == pytest.approx(1.0, abs=1e-12)
        assert score.precision == pytest.approx(0.5, abs=1e-12)

    @given(texts)
    @settings(max_examples=100, deadline=None)
    def test_self_similarity_is_one(self, text):
        if textproc.tokenize(text).word_count == 0:
            return
        assert rouge_lsum(text, text).f1 == pytest.approx(1.0, abs=1e-12)


class TestReadability:
    def test_fkgl_worked_example(self):
        # 1 sentence, 10 words, 10 syllables -> 0.39*10 + 11.8*1 - 15.59
        t = textproc.tokenize("The cat sat on the mat with one red dog.")
        assert t.word_count == 10 and t.sentence_count == 1
        assert sum(textproc.count_syllables(w) for w in t.tokens) == 10
        assert fkgl(t) == pytest.approx(0.11, abs=1e-9)

    def test_fkgl_empty(self):
        with pytest.raises(EmptyText):
            fkgl(textproc.tokenize(""))

    def test_fkgl_monotone_in_sentence_count(self):
        one = textproc.TokenizedText(raw="", tokens=("a",) * 12, sentences=((0, 12),))
        two = textproc.TokenizedText(raw="", tokens=("a",) * 12, sentences=((0, 6), (6, 12)))
        assert fkgl(two) < fkgl(one)

    def test_dcrs_all_familiar(self):
        t = textproc.tokenize("The cat sat on the mat with one red dog.")
        assert dcrs(t) == pytest.approx(0.496, abs=1e-9)

    def test_dcrs_worked_example_with_difficult_words(self):
        text = "The cat sat on the neutrino with one red neutrino."
        t = textproc.tokenize(text)
        assert t.word_count == 10
        assert dcrs(t) == pytest.approx(0.1579 * 20 + 0.0496 * 10 + 3.6365, abs=1e-9)

    def test_dcrs_threshold_is_strict(self):
        # exactly 5% difficult: no adjustment
        fam = FamiliarWordList(frozenset(["aa"]))
        tokens = ("aa",) * 19 + ("zorbo",)
        t = textproc.TokenizedText(raw="", tokens=tokens, sentences=((0, 20),))
        assert dcrs(t, fam) == pytest.approx(0.1579 * 5 + 0.0496 * 20, abs=1e-12)
        # one more difficult word crosses the threshold
        tokens = ("aa",) * 18 + ("zorbo", "zorbo")
        t = textproc.TokenizedText(raw="", tokens=tokens, sentences=((0, 20),))
        assert dcrs(t, fam) == pytest.approx(0.1579 * 10 + 0.0496 * 20 + 3.6365, abs=1e-12)

    def test_repetition_invariance(self):
        text = "Bees pollinate many crops. Losing bees would reduce harvests."
        t1 = textproc.tokenize(text)
        t3 = textproc.tokenize(" ".join([text] * 3))
        assert fkgl(t3) == pytest.approx(fkgl(t1), abs=1e-9)
        assert dcrs(t3) == pytest.approx(dcrs(t1), abs=1e-9)

    def test_familiar_list_loaded(self):
        familiar = default_familiar_words()
        assert len(familiar.words) > 2500
        assert "the" in familiar and "neutrino" not in familiar


class TestEvaluateSummary:
    def test_reference_less_report(self):
        report = evaluate_summary("Bees help farms. Fields near hives produce more fruit.")
        assert report.rouge1 is None and report.rouge2 is None and report.rouge_lsum is None
        assert math.isfinite(report.fkgl) and math.isfinite(report.dcrs)
        assert report.word_count == textproc.tokenize(
            "Bees help farms. Fields near hives produce more fruit."
        ).word_count

    def test_self_reference_is_perfect(self):
        text = "The cats chased the mice.\nThe mice hid in the barn."
        report = evaluate_summary(text, text)
        assert report.rouge1.f1 == 1.0
        assert report.rouge2.f1 == 1.0
        assert report.rouge_lsum.f1 == 1.0

    def test_empty_candidate_rejected(self):
        with pytest.raises(EmptyCandidate):
            evaluate_summary("...")

    def test_fixture_pair_matches_oracle(self, data_dir):
        import json

        line = (data_dir / "rouge_fixture.jsonl").read_text().splitlines()[0]
        pair = json.loads(line)
        report = evaluate_summary(pair["candidate"], pair["reference"])
        p, r, f = rouge_oracle.score_rouge_n(pair["candidate"], pair["reference"], 1)
        assert report.rouge1.f1 == pytest.approx(f, abs=1e-12)
        p, r, f = rouge_oracle.score_rouge_lsum(pair["candidate"], pair["reference"])
        assert report.rouge_lsum.f1 == pytest.approx(f, abs=1e-12)


class TestExternalAdapter:
    def _write_adapter(self, tmp_path, body):
        script = tmp_path / "adapter.py"
        script.write_text(body)
        cmd = [sys.executable, str(script)]
        return cmd

    def test_adapter_output_merged(self, tmp_path):
        cmd = self._write_adapter(
            tmp_path,
            "import sys\n"
            "args = dict(zip(sys.argv[1::2], sys.argv[2::2]))\n"
            "text = open(args['--candidate']).read()\n"
            "print(len(text.split()) / 100)\n",
        )
        report = evaluate_summary("five words in this summary", external={"fake": cmd})
        assert report.external["fake"] == pytest.approx(0.05)

    def test_failing_adapter_marked_unavailable(self, tmp_path):
        cmd = self._write_adapter(tmp_path, "import sys\nsys.exit(3)\n")
        report = evaluate_summary("some text here", external={"bad": cmd})
        assert report.external["bad"] is None

    def test_missing_adapter_marked_unavailable(self):
        report = evaluate_summary("some text here", external={"gone": ["/no/such/bin"]})
        assert report.external["gone"] is None
