"""Analysis-report assembly: one deterministic JSON-ready dict per ideal."""

from __future__ import annotations

from typing import Optional

from . import correspondence as corr
from . import fock as fock_mod
from . import ideals as ideals_mod
from . import quantised as quantised_mod
from .errors import InfiniteTypeError, TruncationTooShallowError
from .ideals import MonomialIdeal
from .quantised import QuantisedSystem
from .words import Word, format_word


def word_json(word: Word, d: int):
    return format_word(word, d)


def ideal_json(ideal: MonomialIdeal) -> dict:
    return {
        "d": ideal.d,
        "basis": [format_word(w, ideal.d) for w in ideal.sorted_basis()],
        "patterns": [
            {
                "u": format_word(p.u, ideal.d),
                "v": format_word(p.v, ideal.d),
                "w": format_word(p.w, ideal.d),
            }
            for p in ideal.sorted_patterns()
        ],
        "type": ideal.type_k if ideal.is_finite_type else "infinite",
    }


def system_json(system: QuantisedSystem) -> dict:
    d = system.d
    classes = [
        {
            "index": c,
            "representative": format_word(system.representatives[c], d),
            "infinite": system.infinite_flags[c],
            "letters": list(system.supp(c)),
        }
        for c in range(system.class_count)
    ]
    supports = quantised_mod.q_projection_supports(system)
    return {
        "level": system.level,
        "certified": system.certified,
        "bound": system.bound,
        "class_count": system.class_count,
        "classes": classes,
        "domains": {
            str(i): sorted(system.domains[i - 1]) for i in range(1, d + 1)
        },
        "maps": {
            str(i): {str(c): t for c, t in sorted(system.maps[i - 1].items())}
            for i in range(1, d + 1)
        },
        "q_supports": {
            "".join(map(str, bits)): sorted(classes_)
            for bits, classes_ in sorted(supports.items(), reverse=True)
        },
    }


def analyze(ideal: MonomialIdeal, fock_depth: int = 6, bound: Optional[int] = 8) -> dict:
    """Full analysis report; every verdict carries its evidence."""
    d = ideal.d
    system = quantised_mod.quantised_system(
        ideal, bound=None if ideal.is_finite_type else bound
    )
    subshift, subshift_certified = ideals_mod.classify_subshift(
        ideal, bound=None if ideal.is_finite_type else bound
    )
    left = ideals_mod.sink_search(
        ideal, ideals_mod.Side.LEFT, None if ideal.is_finite_type else bound
    )
    right = ideals_mod.sink_search(
        ideal, ideals_mod.Side.RIGHT, None if ideal.is_finite_type else bound
    )

    ok, payload = quantised_mod.check_auto_continuity(system)
    if ok:
        auto = {
            "holds": True,
            "witnesses": {
                str(c): {"w": format_word(w, d), "z": format_word(z, d)}
                for c, (w, z) in sorted(payload.items())
            },
        }
    else:
        auto = {"holds": False, "counterexample_class": payload}

    model = corr.correspondence_model(
        ideal, bound=None if ideal.is_finite_type else bound
    )
    dichotomy = corr.dichotomy_verdict(model)
    try:
        envelope = corr.cenv_verdict(ideal).value
        envelope_reason = None
    except InfiniteTypeError:
        envelope = None
        envelope_reason = "infinite type: the envelope criterion does not apply"

    fock = fock_mod.build_fock(ideal, fock_depth)
    try:
        relations = fock_mod.verify_generator_relations(fock).as_dict()
    except TruncationTooShallowError as exc:
        relations = {"error": str(exc)}
    covariance: dict
    if ideal.is_finite_type and fock_depth >= 2 * ideal.type_k + 2:
        covariance = fock_mod.verify_covariance_relations(ideal, fock_depth).as_dict()
    else:
        covariance = {"skipped": "requires finite type and depth >= 2k + 2"}

    return {
        "ideal": ideal_json(ideal),
        "subshift": {
            "class": subshift.value,
            "certified": subshift_certified,
            "left_sink": None if left.word is None else format_word(left.word, d),
            "right_sink": None if right.word is None else format_word(right.word, d),
        },
        "quantised": system_json(system),
        "sofic": {
            "finite_class_space": True,
            "observed_level": system.level,
            "certified": system.certified,
        },
        "auto_continuity": auto,
        "correspondence": {
            "kernel": model.kernel.value,
            "vacuum_witnesses": None
            if model.vacuum_witnesses is None
            else [format_word(w, d) for w in model.vacuum_witnesses],
            "katsura": model.katsura.value,
            "full": model.full,
            "full_certified": model.full_certified,
            "relative_j_generators": [
                {"word": format_word(w, d), "complement_classes": sorted(comp)}
                for w, comp in model.relative_j_generators
            ],
            "dichotomy": {
                "cuntz_pimsner": dichotomy.branch.value,
                "fock_algebra_is_free_toeplitz": dichotomy.fock_algebra_is_free_toeplitz,
            },
            "envelope": envelope,
            **({"envelope_reason": envelope_reason} if envelope_reason else {}),
        },
        "fock": {
            "depth": fock_depth,
            "dim": fock.dim,
            "generator_relations": relations,
            "covariance_relations": covariance,
        },
    }


def classes_csv(system: QuantisedSystem) -> str:
    """Delimited class table for the report directory."""
    lines = ["class,representative,infinite,letters"]
    for c in range(system.class_count):
        rep = format_word(system.representatives[c], system.d) or "()"
        letters = ";".join(map(str, system.supp(c)))
        lines.append(f"{c},{rep},{str(system.infinite_flags[c]).lower()},{letters}")
    return "\n".join(lines) + "\n"
