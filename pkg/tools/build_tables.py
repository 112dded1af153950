"""Regenerate the Devanagari and Hangul rule tables.

Both scripts are combinatorial (consonant x vowel sign, jamo inventories), so
their tables are expanded from the inventories below rather than kept by hand.

    python tools/build_tables.py
"""

from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "unitrans" / "data" / "tables"

NUKTA = "़"
VIRAMA = "्"

CONSONANTS = {
    "क": "k", "ख": "kh", "ग": "g", "घ": "gh", "ङ": "ng",
    "च": "c", "छ": "ch", "ज": "j", "झ": "jh", "ञ": "ny",
    "ट": "tt", "ठ": "tth", "ड": "dd", "ढ": "ddh", "ण": "nn",
    "त": "t", "थ": "th", "द": "d", "ध": "dh", "न": "n",
    "प": "p", "फ": "ph", "ब": "b", "भ": "bh", "म": "m",
    "य": "y", "र": "r", "ल": "l", "ळ": "ll", "व": "v",
    "श": "sh", "ष": "ss", "स": "s", "ह": "h",
    # nukta forms stay decomposed under NFKC
    "क" + NUKTA: "q", "ख" + NUKTA: "kh", "ग" + NUKTA: "g", "ज" + NUKTA: "z",
    "ड" + NUKTA: "dd", "ढ" + NUKTA: "ddh", "फ" + NUKTA: "f", "य" + NUKTA: "y",
    "न" + NUKTA: "nnn", "र" + NUKTA: "rr", "ळ" + NUKTA: "lll",
}

VOWEL_SIGNS = {
    "ा": "aa", "ि": "i", "ी": "ii", "ु": "u", "ू": "uu",
    "ृ": "r", "ॄ": "rr", "ॅ": "e", "ॆ": "e", "े": "e",
    "ै": "ai", "ॉ": "o", "ॊ": "o", "ो": "o", "ौ": "au",
}

INDEPENDENT_VOWELS = {
    "अ": "a", "आ": "aa", "इ": "i", "ई": "ii", "उ": "u", "ऊ": "uu", "ऋ": "ra",
    "ऌ": "la", "ऍ": "e", "ऎ": "e", "ए": "e", "ऐ": "ai", "ऑ": "o", "ऒ": "o",
    "ओ": "o", "औ": "au", "ऄ": "a",
}

SIGNS = {"ं": "m", "ँ": "m", "ः": "h", NUKTA: "", VIRAMA: "", "ऽ": ""}


def devanagari():
    lines = [
        "# Devanagari (Hindi, Marathi, Nepali). Generated by tools/build_tables.py.",
        "# Consonants carry an inherent a, removed before a vowel sign or virama",
        "# and at the end of a word.",
        "%include latin",
        "।\t ",
        "॥\t ",
    ]
    for src, tgt in INDEPENDENT_VOWELS.items():
        lines.append(f"{src}\t{tgt}")
    for src, tgt in SIGNS.items():
        lines.append(f"{src}\t{tgt}")
    for cons, base in CONSONANTS.items():
        lines.append(f"{cons}\t{base}a")
        lines.append(f"{cons} \t{base} ")
        lines.append(f"{cons}{VIRAMA}\t{base}")
        for sign, vowel in VOWEL_SIGNS.items():
            lines.append(f"{cons}{sign}\t{base}{vowel}")
    return "\n".join(lines) + "\n"


INITIALS = ["g", "gg", "n", "d", "dd", "r", "m", "b", "bb", "s", "ss", "", "j", "jj",
            "c", "k", "t", "p", "h"]
VOWELS = ["a", "ae", "ya", "yae", "eo", "e", "yeo", "ye", "o", "wa", "wai", "oe", "yo",
          "u", "weo", "we", "wi", "yu", "eu", "yi", "i"]
FINALS = ["g", "gg", "gs", "n", "nj", "nh", "d", "l", "lg", "lm", "lb", "ls", "lt", "lp",
          "lh", "m", "b", "bs", "s", "ss", "ng", "j", "c", "k", "t", "p", "h"]


def hangul():
    lines = [
        "# Hangul, romanized jamo by jamo after canonical decomposition.",
        "# Generated by tools/build_tables.py.",
        "%normalize NFD",
        "%include latin",
    ]
    for i, tgt in enumerate(INITIALS):
        lines.append(f"{chr(0x1100 + i)}\t{tgt}")
    for i, tgt in enumerate(VOWELS):
        lines.append(f"{chr(0x1161 + i)}\t{tgt}")
    for i, tgt in enumerate(FINALS):
        lines.append(f"{chr(0x11A8 + i)}\t{tgt}")
    return "\n".join(lines) + "\n"


def main():
    (OUT / "devanagari.tsv").write_text(devanagari(), encoding="utf-8")
    (OUT / "hangul.tsv").write_text(hangul(), encoding="utf-8")


if __name__ == "__main__":
    main()
