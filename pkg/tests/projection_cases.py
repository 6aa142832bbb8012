"""Hand-constructed projection fixtures: (name, source, target forms, Pharaoh links,
expected tags after project + merge_gaps, expected surviving (form, tag) pairs)."""

N, V, D, A, P = "NOUN", "VERB", "DET", "ADJ", "ADP"

CASES = [
    (
        "identity",
        [("the", D), ("cat", N)], "le chat", "0-0 1-1",
        [D, N], [("le", D), ("chat", N)],
    ),
    (
        "reordering",
        [("red", A), ("car", N)], "voiture rouge", "0-1 1-0",
        [N, A], [("voiture", N), ("rouge", A)],
    ),
    (
        "collision_first_source_wins",
        [("dog", N), ("x", D), ("y", D), ("runs", V)], "a b c", "0-0 0-1 3-1 3-2",
        [N, N, V], [("a", N), ("b", N), ("c", V)],
    ),
    (
        "collision_order_independent_of_link_order",
        [("runs", V), ("dog", N)], "k", "1-0 0-0",
        [V], [("k", V)],
    ),
    (
        "equal_tags_not_a_collision",
        [("big", A), ("red", A)], "g", "0-0 1-0",
        [A], [("g", A)],
    ),
    (
        "single_gap_merged",
        [("New", N), ("York", N)], "nueva gran york", "0-0 1-2",
        [N, N, N], [("nueva", N), ("gran", N), ("york", N)],
    ),
    (
        "gap_between_different_tags_kept_empty",
        [("dog", N), ("runs", V)], "perro que corre", "0-0 1-2",
        [N, None, V], [("perro", N), ("corre", V)],
    ),
    (
        "gap_of_two_not_merged",
        [("a", N), ("b", N)], "p q r s", "0-0 1-3",
        [N, None, None, N], [("p", N), ("s", N)],
    ),
    (
        "edge_gaps_untouched",
        [("cat", N)], "x gato y", "0-1",
        [None, N, None], [("gato", N)],
    ),
    (
        "unaligned_dropped",
        [("in", P), ("the", D), ("house", N)], "dans maison ici", "0-0 2-1",
        [P, N, None], [("dans", P), ("maison", N)],
    ),
    (
        "one_to_many",
        [("cannot", V)], "ne peut pas", "0-0 0-1 0-2",
        [V, V, V], [("ne", V), ("peut", V), ("pas", V)],
    ),
    (
        "nothing_aligned",
        [("hello", N)], "bonjour", "",
        [None], [],
    ),
    (
        "two_separate_single_gaps",
        [("a", N), ("b", N), ("c", N)], "p q r s t", "0-0 1-2 2-4",
        [N, N, N, N, N], [("p", N), ("q", N), ("r", N), ("s", N), ("t", N)],
    ),
]
