"""Text metrics: segmentation, the hedging lexicon, and report aggregation."""

import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from vaguesig import textmetrics as tm
from vaguesig.lexicons import CATEGORIES
from vaguesig.roughset import ToneClass


LEX = tm.default_lexicon()


# ---------------------------------------------------------------------------
# segmentation

# Curated fixture: each entry is exactly one sentence after segmentation of
# the joined text. Mixes terminal marks, abbreviations, and decimals.
CURATED_SENTENCES = [
    "Acme Inc. reported revenue of $1.25 billion in Q3, up 4% from last year.",
    "Margins, however, contracted by 120 bps.",
    "Management guided FY25 EPS to a range of $2.10 to $2.30.",
    "Is that achievable?",
    "We doubt it!",
    "The U.S. consumer remains resilient despite higher rates.",
    "Channel checks vs. peers point to share gains.",
    "Dr. Lee joined the board in March.",
    "The firm trades at 14.5 times forward earnings.",
    "Free cash flow conversion reached 92% in the quarter.",
    "Capex will rise to $450M next year.",
    "That assumes no further supply disruptions.",
    "Management hosted an investor day in New York.",
    "Attendance doubled from the prior event.",
    "A new CFO was announced after the close.",
    "Shares fell 3% in late trading.",
    "Does the selloff create an entry point?",
    "We think the risk-reward is balanced.",
    "Gross margin guidance implies 200 bps of expansion.",
    "Input costs have eased since January.",
    "Pricing actions should hold through year end.",
    "Competition from private labels is intensifying.",
    "Inventory days improved to 48 from 55.",
    "Receivables remain elevated.",
    "The dividend was raised by 8%.",
    "Buybacks resumed in the quarter.",
    "Leverage sits at 1.9 times net debt to EBITDA.",
    "Interest coverage is comfortable.",
    "The segment mix shifted toward services.",
    "Services now represent 38% of revenue.",
    "Churn ticked down sequentially.",
    "Bookings growth decelerated to 6%.",
    "Backlog stands at $3.4 billion.",
    "Book-to-bill was 1.1 in the period.",
    "The company closed two tuck-in acquisitions.",
    "Integration costs will hit margins near term.",
    "Synergies are expected within 18 months.",
    "Headcount was reduced by 5% in the restructuring.",
    "Severance charges totaled $22M.",
    "The tax rate normalized to 21%.",
    "Currency was a 90 bps headwind.",
    "Hedges cover roughly half of exposure.",
    "What would a recession mean for demand?",
    "Order patterns show no cracks yet!",
    "Utilization rates are at cycle highs.",
    "Lead times normalized across product lines.",
    "The balance sheet can fund organic growth.",
    "No equity issuance is contemplated.",
    "Consensus sits 4% below our estimate.",
    "We raise our target multiple to 16 times.",
]


def test_curated_fixture_has_fifty_sentences():
    assert len(CURATED_SENTENCES) == 50
    text = " ".join(CURATED_SENTENCES)
    parsed = tm.segment_sentences(text)
    assert len(parsed) == 50
    assert [s.text for s in parsed] == CURATED_SENTENCES
    assert [s.index for s in parsed] == list(range(50))


def test_segment_three_terminal_marks():
    assert [s.text for s in tm.segment_sentences("A. B? C!")] == ["A.", "B?", "C!"]


def test_segment_decimal_not_a_boundary():
    parsed = tm.segment_sentences("EPS of $2.50 rose. Margins fell.")
    assert [s.text for s in parsed] == ["EPS of $2.50 rose.", "Margins fell."]


def test_segment_abbreviation_guards():
    text = "The U.S. economy grew in Q1 vs. last year. Acme Inc. beat estimates."
    parsed = tm.segment_sentences(text)
    assert len(parsed) == 2
    assert parsed[0].text.endswith("last year.")


def test_segment_ellipsis_and_closers():
    parsed = tm.segment_sentences('He said "growth." Then he left...')
    assert [s.text for s in parsed] == ['He said "growth."', "Then he left..."]


def test_segment_trailing_text_without_terminal():
    parsed = tm.segment_sentences("First point. second point without a stop")
    assert [s.text for s in parsed] == [
        "First point.",
        "second point without a stop",
    ]


def test_segment_empty_text_raises():
    with pytest.raises(tm.EmptyReportError):
        tm.segment_sentences("   \n\t ")
    with pytest.raises(tm.EmptyReportError):
        tm.Sentence(" ")


# ---------------------------------------------------------------------------
# numeric flag

SENTENCE_A = tm.Sentence(
    "While still early, SBUX has a newfound willingness to take necessary "
    "measures to cut costs, close stores and repair margins as it moves from "
    "growth to maturity."
)
SENTENCE_B = tm.Sentence(
    "Recent investor meetings we hosted with management increased our "
    "confidence in SBUX's ability to obtain $500M in cost savings in FY09 "
    "alone, but caution investors not to expect an overnight revival in "
    "top-line results."
)
SENTENCE_C = tm.Sentence(
    "Pfizer may not even be able to achieve $2.00 in 2012 because revenue "
    "will fall materially short of management's $70B target."
)
SENTENCE_TOFA = tm.Sentence(
    "we believe that tofacitinib's profile sets it up to be a blockbuster"
)


def test_has_numeric_examples():
    assert not tm.has_numeric(SENTENCE_A)  # text-only sentence
    assert tm.has_numeric(SENTENCE_B)
    assert tm.has_numeric(tm.Sentence("Revenue grew 15% y/y."))
    # bare digits do not count as numeric content
    assert not tm.has_numeric(tm.Sentence("Revenue grew 15 points in 2012."))


def test_has_numeric_case_invariant():
    s = tm.Sentence("Savings of $500M expected.")
    assert tm.has_numeric(s) == tm.has_numeric(tm.Sentence(s.text.upper()))


# ---------------------------------------------------------------------------
# hedging

def test_has_hedge_quoted_sentences():
    assert tm.has_hedge(SENTENCE_C, LEX)  # "may"
    assert tm.has_hedge(SENTENCE_TOFA, LEX)  # "believe"
    assert not tm.has_hedge(tm.Sentence("Revenue was 100."), LEX)


def test_has_hedge_multiword_and_inflections():
    assert tm.has_hedge(tm.Sentence("It was, so to speak, a bargain."), LEX)
    assert tm.has_hedge(tm.Sentence("It is close to a record."), LEX)
    assert tm.has_hedge(tm.Sentence("Margins appear stretched."), LEX)
    assert tm.has_hedge(tm.Sentence("He thought it through."), LEX)
    assert tm.has_hedge(tm.Sentence("Demand tends to soften in winter."), LEX)
    # token boundaries: "summary" must not match "may"
    assert not tm.has_hedge(tm.Sentence("The summary was released."), LEX)
    assert not tm.has_hedge(tm.Sentence("A bitter dispute."), LEX)


def test_has_hedge_case_and_punctuation_invariant():
    base = tm.Sentence("We believe margins recover.")
    shouty = tm.Sentence("WE BELIEVE, MARGINS RECOVER!")
    assert tm.has_hedge(base, LEX) and tm.has_hedge(shouty, LEX)


def test_default_lexicon_contents():
    patterns = {(c, p) for c, p in LEX.patterns()}
    assert ("vague_quantity_time_frequency", "approximate(ly)") in patterns
    assert ("vague_extent", "so to say/speak") in patterns
    assert {c for c, _ in patterns} == set(CATEGORIES)


def test_every_default_entry_variant_triggers_hedge():
    for entry in LEX.entries:
        for variant in entry.variants:
            carrier = tm.Sentence(f"It is {' '.join(variant)} here.")
            assert tm.has_hedge(carrier, LEX), entry.pattern


# ---------------------------------------------------------------------------
# lexicon files

def test_load_lexicon_round_trip(tmp_path):
    path = tmp_path / "lex.tsv"
    path.write_text(tm.lexicon_to_text(LEX), encoding="utf-8")
    again = tm.load_lexicon(path)
    assert again.patterns() == LEX.patterns()


def test_load_lexicon_malformed_line_has_line_number(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("vague_extent\tnearly\nnot a valid line\n", encoding="utf-8")
    with pytest.raises(tm.LexiconParseError, match="bad.tsv:2"):
        tm.load_lexicon(path)


def test_load_lexicon_unknown_category(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("madeup\tnearly\n", encoding="utf-8")
    with pytest.raises(tm.LexiconParseError, match="unknown category"):
        tm.load_lexicon(path)


def test_load_lexicon_duplicate_warns_and_dedupes():
    source = io.StringIO("vague_extent\tnearly\nvague_extent\tnearly\n")
    with pytest.warns(UserWarning, match="duplicate"):
        lex = tm.load_lexicon(source)
    assert len(lex) == 1


def test_load_lexicon_empty_file_is_valid(tmp_path):
    path = tmp_path / "empty.tsv"
    path.write_text("# nothing here\n", encoding="utf-8")
    lex = tm.load_lexicon(path)
    assert len(lex) == 0
    assert not tm.has_hedge(tm.Sentence("maybe"), lex)


# ---------------------------------------------------------------------------
# naive fallback tone

def test_naive_tone_examples():
    assert tm.naive_tone(tm.Sentence("strong growth")) is ToneClass.POSITIVE
    assert (
        tm.naive_tone(tm.Sentence("revenue will fall materially short"))
        is ToneClass.NEGATIVE
    )
    assert tm.naive_tone(tm.Sentence("The company is based in Ohio.")) is (
        ToneClass.NEUTRAL
    )


# ---------------------------------------------------------------------------
# report metrics

def test_report_metrics_simple_fractions():
    sentences = [tm.Sentence(f"Sentence number {i}.", i) for i in range(10)]
    labels = [ToneClass.POSITIVE] * 4 + [ToneClass.NEGATIVE] * 2 + [
        ToneClass.NEUTRAL
    ] * 4
    m = tm.report_metrics(sentences, labels, LEX)
    assert m.tone == pytest.approx(0.2)
    assert m.pos_pct == 0.4 and m.neg_pct == 0.2


def test_report_metrics_all_neutral():
    sentences = [tm.Sentence("Filler text here.", i) for i in range(5)]
    m = tm.report_metrics(sentences, [ToneClass.NEUTRAL] * 5, LEX)
    assert m.tone == 0.0 and m.pos_pct == 0.0 and m.neg_pct == 0.0


def test_report_metrics_hand_tallied_fixture():
    # 20 sentences; tallies by hand: 6 positive labels, 5 negative labels,
    # 5 sentences carry $ or %, 7 sentences carry a hedge term.
    rows = [
        # (text, label, has_currency_or_pct, hedged)
        ("Growth may accelerate.", ToneClass.POSITIVE, False, True),       # may
        ("Revenue rose 8% y/y.", ToneClass.POSITIVE, True, False),
        ("We believe share gains continue.", ToneClass.POSITIVE, False, True),
        ("Margins improved again.", ToneClass.POSITIVE, False, False),
        ("Bookings were roughly flat.", ToneClass.NEUTRAL, False, True),   # roughly
        ("The quarter was uneventful.", ToneClass.NEUTRAL, False, False),
        ("Cash stands at $2B.", ToneClass.NEUTRAL, True, False),
        ("Capex plans are unchanged.", ToneClass.NEUTRAL, False, False),
        ("Guidance seems conservative.", ToneClass.POSITIVE, False, True),  # seems
        ("Competition is intensifying.", ToneClass.NEGATIVE, False, False),
        ("Churn increased somewhat.", ToneClass.NEGATIVE, False, True),    # somewhat
        ("The dividend grew 5%.", ToneClass.POSITIVE, True, False),
        ("Costs could overshoot.", ToneClass.NEGATIVE, False, True),       # could
        ("Leverage is stable.", ToneClass.NEUTRAL, False, False),
        ("Demand softened late in Q3.", ToneClass.NEGATIVE, False, False),
        ("Pricing held firm.", ToneClass.NEUTRAL, False, False),
        ("Backlog covers a year.", ToneClass.NEUTRAL, False, False),
        ("Most of the risk is priced in.", ToneClass.NEUTRAL, False, True),  # most of
        ("Buybacks added $1 per share.", ToneClass.NEUTRAL, True, False),
        ("FX was a 2% headwind.", ToneClass.NEGATIVE, True, False),
    ]
    sentences = [tm.Sentence(text, i) for i, (text, _, _, _) in enumerate(rows)]
    labels = [label for _, label, _, _ in rows]
    for s, (_, _, numeric, hedged) in zip(sentences, rows):
        assert tm.has_numeric(s) == numeric, s.text
        assert tm.has_hedge(s, LEX) == hedged, s.text
    m = tm.report_metrics(sentences, labels, LEX)
    assert m.n_sentences == 20
    assert m.pos_pct == 6 / 20
    assert m.neg_pct == 5 / 20
    assert m.tone == pytest.approx(1 / 20)
    assert m.text_only_pct == 15 / 20
    assert m.hedge_pct == 7 / 20


def test_report_metrics_length_mismatch():
    sentences = [tm.Sentence("One."), tm.Sentence("Two.")]
    with pytest.raises(ValueError, match="tone labels"):
        tm.report_metrics(sentences, [ToneClass.NEUTRAL], LEX)
    with pytest.raises(tm.EmptyReportError):
        tm.report_metrics([], [], LEX)


# ---------------------------------------------------------------------------
# properties

@given(
    st.lists(
        st.sampled_from([ToneClass.POSITIVE, ToneClass.NEUTRAL, ToneClass.NEGATIVE]),
        min_size=1,
        max_size=60,
    )
)
@settings(max_examples=150, deadline=None)
def test_tone_identity_and_bounds(labels):
    sentences = [tm.Sentence(f"Sentence {i}.", i) for i in range(len(labels))]
    m = tm.report_metrics(sentences, labels, LEX)
    assert m.tone == m.pos_pct - m.neg_pct
    assert -1.0 <= m.tone <= 1.0
    assert m.pos_pct + m.neg_pct <= 1.0 + 1e-12


@given(st.permutations(list(range(12))))
@settings(max_examples=60, deadline=None)
def test_metrics_invariant_to_sentence_order(order):
    texts = [
        "Growth may accelerate.",
        "Revenue rose 8% y/y.",
        "Margins improved.",
        "Costs could overshoot.",
        "Cash stands at $2B.",
        "Demand softened.",
        "Pricing held firm.",
        "Churn increased somewhat.",
        "Backlog covers a year.",
        "The dividend grew 5%.",
        "Guidance seems conservative.",
        "Competition is intensifying.",
    ]
    labels = [
        ToneClass.POSITIVE, ToneClass.POSITIVE, ToneClass.POSITIVE,
        ToneClass.NEGATIVE, ToneClass.NEUTRAL, ToneClass.NEGATIVE,
        ToneClass.NEUTRAL, ToneClass.NEGATIVE, ToneClass.NEUTRAL,
        ToneClass.POSITIVE, ToneClass.POSITIVE, ToneClass.NEGATIVE,
    ]
    base = tm.report_metrics(
        [tm.Sentence(t, i) for i, t in enumerate(texts)], labels, LEX
    )
    shuffled = tm.report_metrics(
        [tm.Sentence(texts[j], i) for i, j in enumerate(order)],
        [labels[j] for j in order],
        LEX,
    )
    assert shuffled == base


def test_stripping_currency_and_percent_forces_text_only():
    sentences = [tm.Sentence(t, i) for i, t in enumerate(CURATED_SENTENCES)]
    stripped = [
        tm.Sentence(t.replace("$", "").replace("%", ""), i)
        for i, t in enumerate(CURATED_SENTENCES)
    ]
    labels = [ToneClass.NEUTRAL] * len(sentences)
    assert tm.report_metrics(stripped, labels, LEX).text_only_pct == 1.0
    assert tm.report_metrics(sentences, labels, LEX).text_only_pct < 1.0


# ---------------------------------------------------------------------------
# corpus loading

def test_load_corpus_labeled_and_raw(tmp_path):
    path = tmp_path / "corpus.jsonl"
    lines = [
        json.dumps(
            {
                "report_id": "r1",
                "analyst_id": "a1",
                "firm_id": "f1",
                "date": "2009-02-18",
                "sentences": [
                    {"text": "We believe margins improve.", "tone_label": "positive"},
                    {"text": "Revenue fell 4%.", "tone_label": -1},
                ],
            }
        ),
        json.dumps({"text": "Strong growth ahead. Risks remain."}),
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    reports = tm.load_corpus(path)
    assert len(reports) == 2
    assert reports[0].labels == [ToneClass.POSITIVE, ToneClass.NEGATIVE]
    assert reports[0].analyst_id == "a1"
    assert reports[1].labels is None
    assert len(reports[1].sentences) == 2


def test_load_corpus_errors_carry_line_numbers(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"report_id": "r1"}\n', encoding="utf-8")
    with pytest.raises(tm.CorpusFormatError, match="bad.jsonl:1"):
        tm.load_corpus(path)
    path.write_text("not json\n", encoding="utf-8")
    with pytest.raises(tm.CorpusFormatError, match="invalid JSON"):
        tm.load_corpus(path)
    path.write_text(
        '{"sentences": [{"text": "Fine."}, {"text": "Ok.", "tone_label": "odd"}]}\n',
        encoding="utf-8",
    )
    with pytest.raises(tm.CorpusFormatError, match="unknown tone label"):
        tm.load_corpus(path)
