"""Record reference romanizations for the romanizer's oracle fixtures.

Requires the ``uroman`` package (not a runtime dependency). Reads
``lang<TAB>text`` lines and writes ``lang<TAB>text<TAB>expected`` with the
text NFKC+lowercase normalized first.

    python tools/gen_romanize_fixtures.py words.tsv tests/fixtures/romanize_oracle.tsv
"""

import sys
import unicodedata

import uroman

ISO3 = {
    "ru": "rus", "uk": "ukr", "bg": "bul", "be": "bel", "mk": "mkd", "sr": "srp",
    "kk": "kaz", "ky": "kir", "mn": "mon", "tg": "tgk", "tt": "tat", "el": "ell",
    "hi": "hin", "mr": "mar", "ne": "nep", "ko": "kor", "de": "deu", "fr": "fra",
    "es": "spa", "pt": "por", "pl": "pol", "tr": "tur", "vi": "vie", "cs": "ces",
    "is": "isl", "da": "dan", "ro": "ron", "sv": "swe",
}


def main(src, dst):
    ur = uroman.Uroman()
    out = ["# lang\ttext\texpected (reference romanizer output, recorded verbatim)"]
    for line in open(src, encoding="utf-8"):
        if not line.strip() or line.startswith("#"):
            continue
        lang, text = line.rstrip("\n").split("\t")
        text = unicodedata.normalize("NFKC", text).lower()
        expected = ur.romanize_string(text, lcode=ISO3[lang])
        out.append(f"{lang}\t{text}\t{expected}")
    with open(dst, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main(*sys.argv[1:3])
