"""Bundled wordlist data for the text metrics.

The default hedging lexicon lists lemmatized patterns in five groups:
subjective belief, vague probability, vague quantity/time/frequency, vague
extent, and vague manner. Patterns use two notations expanded at build time:
``(ly)`` marks an optional adverbial suffix ("approximate(ly)" covers both
forms) and ``/`` separates alternatives within one token ("so to say/speak").
Inflected surface forms are produced from the explicit table below rather
than a runtime stemmer, so the expansion is deterministic and auditable.

The polarity lists back the naive fallback tone classifier only; they are a
deliberately small stand-in for report text whose per-sentence tone labels
come from an external classifier.
"""

from __future__ import annotations

CATEGORIES = (
    "subjective_belief",
    "vague_probability",
    "vague_quantity_time_frequency",
    "vague_extent",
    "vague_manner",
)

# (category, lemmatized pattern) pairs; the loader expands notation and
# inflections.
DEFAULT_HEDGE_PATTERNS: tuple[tuple[str, str], ...] = (
    # subjective beliefs
    ("subjective_belief", "think"),
    ("subjective_belief", "believe"),
    ("subjective_belief", "feel"),
    ("subjective_belief", "sense"),
    ("subjective_belief", "suppose"),
    ("subjective_belief", "suggest"),
    ("subjective_belief", "argue"),
    ("subjective_belief", "in my/our view"),
    ("subjective_belief", "from my/our perspective"),
    ("subjective_belief", "as far as I/we can tell"),
    ("subjective_belief", "to the best of my/our knowledge"),
    # vague probability
    ("vague_probability", "seem"),
    ("vague_probability", "appear"),
    ("vague_probability", "apparent"),
    ("vague_probability", "sound"),
    ("vague_probability", "look like"),
    ("vague_probability", "may"),
    ("vague_probability", "might"),
    ("vague_probability", "could"),
    ("vague_probability", "would"),
    ("vague_probability", "should"),
    ("vague_probability", "maybe"),
    ("vague_probability", "perhaps"),
    ("vague_probability", "unlikely"),
    ("vague_probability", "improbable(ly)"),
    ("vague_probability", "potentially"),
    ("vague_probability", "possible(ly)"),
    ("vague_probability", "likely"),
    ("vague_probability", "probable(ly)"),
    ("vague_probability", "conceivable(ly)"),
    ("vague_probability", "presumably"),
    # vague quantity, time and frequency
    ("vague_quantity_time_frequency", "around"),
    ("vague_quantity_time_frequency", "approximate(ly)"),
    ("vague_quantity_time_frequency", "roughly"),
    ("vague_quantity_time_frequency", "few"),
    ("vague_quantity_time_frequency", "bit"),
    ("vague_quantity_time_frequency", "little"),
    ("vague_quantity_time_frequency", "less"),
    ("vague_quantity_time_frequency", "minority"),
    ("vague_quantity_time_frequency", "some"),
    ("vague_quantity_time_frequency", "several"),
    ("vague_quantity_time_frequency", "number of"),
    ("vague_quantity_time_frequency", "couple of"),
    ("vague_quantity_time_frequency", "numerous"),
    ("vague_quantity_time_frequency", "portion of"),
    ("vague_quantity_time_frequency", "lot"),
    ("vague_quantity_time_frequency", "mass"),
    ("vague_quantity_time_frequency", "many"),
    ("vague_quantity_time_frequency", "plenty"),
    ("vague_quantity_time_frequency", "much"),
    ("vague_quantity_time_frequency", "more"),
    ("vague_quantity_time_frequency", "majority"),
    ("vague_quantity_time_frequency", "most of"),
    ("vague_quantity_time_frequency", "sometime"),
    ("vague_quantity_time_frequency", "earlier"),
    ("vague_quantity_time_frequency", "recent(ly)"),
    ("vague_quantity_time_frequency", "soon"),
    ("vague_quantity_time_frequency", "later"),
    ("vague_quantity_time_frequency", "seldom"),
    ("vague_quantity_time_frequency", "sometimes"),
    ("vague_quantity_time_frequency", "occasionally"),
    ("vague_quantity_time_frequency", "often"),
    # vague extent
    ("vague_extent", "sort of"),
    ("vague_extent", "kind of"),
    ("vague_extent", "more or less"),
    ("vague_extent", "slight(ly)"),
    ("vague_extent", "fairly"),
    ("vague_extent", "pretty"),
    ("vague_extent", "relatively"),
    ("vague_extent", "mostly"),
    ("vague_extent", "largely"),
    ("vague_extent", "principally"),
    ("vague_extent", "mainly"),
    ("vague_extent", "predominantly"),
    ("vague_extent", "almost"),
    ("vague_extent", "nearly"),
    ("vague_extent", "practically"),
    ("vague_extent", "virtually"),
    ("vague_extent", "nominally"),
    ("vague_extent", "not entirely"),
    ("vague_extent", "close to"),
    ("vague_extent", "as it were"),
    ("vague_extent", "so to say/speak"),
    ("vague_extent", "in a manner of speaking"),
    ("vague_extent", "somewhat"),
    ("vague_extent", "to some degree/extent"),
    ("vague_extent", "to a certain degree/extent"),
    ("vague_extent", "to a large degree/extent"),
    # vague manner
    ("vague_manner", "typical(ly)"),
    ("vague_manner", "usually"),
    ("vague_manner", "in essential"),
    ("vague_manner", "essentially"),
    ("vague_manner", "in general"),
    ("vague_manner", "generally"),
    ("vague_manner", "basically"),
    ("vague_manner", "as a rule"),
    ("vague_manner", "tend to"),
    ("vague_manner", "apt to"),
    ("vague_manner", "prone to"),
    ("vague_manner", "something"),
    ("vague_manner", "someone"),
    ("vague_manner", "somebody"),
    ("vague_manner", "somewhere"),
    ("vague_manner", "someplace"),
    ("vague_manner", "somehow"),
    ("vague_manner", "someway"),
    ("vague_manner", "in some/most cases"),
    ("vague_manner", "in a/one sense"),
    ("vague_manner", "in a/one way"),
)

# Explicit surface forms per lemma, applied token-wise when expanding
# patterns. Only open-class heads that actually inflect are listed; modals
# and adverbs match as written.
INFLECTIONS: dict[str, tuple[str, ...]] = {
    "think": ("thinks", "thinking", "thought"),
    "believe": ("believes", "believing", "believed"),
    "feel": ("feels", "feeling", "felt"),
    "sense": ("senses", "sensing", "sensed"),
    "suppose": ("supposes", "supposing", "supposed"),
    "suggest": ("suggests", "suggesting", "suggested"),
    "argue": ("argues", "arguing", "argued"),
    "seem": ("seems", "seeming", "seemed"),
    "appear": ("appears", "appearing", "appeared"),
    "sound": ("sounds", "sounding", "sounded"),
    "look": ("looks", "looking", "looked"),
    "tend": ("tends", "tending", "tended"),
    "bit": ("bits",),
    "lot": ("lots",),
    "mass": ("masses",),
    "minority": ("minorities",),
    "majority": ("majorities",),
    "number": ("numbers",),
    "couple": ("couples",),
    "portion": ("portions",),
    "sort": ("sorts",),
    "kind": ("kinds",),
}

# Small polarity lists for the naive fallback classifier.
POSITIVE_WORDS = frozenset(
    """
    strong strength growth grow grows growing grew improve improves improved
    improving improvement gain gains gained beat beats exceed exceeds exceeded
    outperform outperforms outperformed upside record robust favorable
    momentum upgrade upgrades upgraded bullish opportunity opportunities
    solid profitable profit profits success successful accelerate
    accelerating expansion expand expanding rally surge surged positive
    optimistic healthy win wins winning
    """.split()
)

NEGATIVE_WORDS = frozenset(
    """
    weak weakness decline declines declined declining fall falls falling fell
    miss misses missed short shortfall downside underperform underperforms
    underperformed risk risks concern concerns loss losses downgrade
    downgrades downgraded bearish deteriorate deteriorating drop drops
    dropped cut cuts disappoint disappoints disappointed disappointing
    adverse negative pessimistic slowdown slowing headwind headwinds weaken
    hurt pressure pressured challenging
    """.split()
)
