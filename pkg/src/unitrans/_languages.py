"""Languages covered by the seen (training) and unseen (zero-shot) sets.

Codes are ISO-639-1 where one exists, ISO-639-3 otherwise.
"""
from typing import NamedTuple


class LanguageInfo(NamedTuple):
    name: str
    seen: bool


LANGUAGES = {
    'af': LanguageInfo('Afrikaans', True),
    'am': LanguageInfo('Amharic', True),
    'ar': LanguageInfo('Arabic', True),
    'as': LanguageInfo('Assamese', True),
    'ast': LanguageInfo('Asturian', True),
    'az': LanguageInfo('Azerbaijani', True),
    'be': LanguageInfo('Belarusian', True),
    'bg': LanguageInfo('Bulgarian', True),
    'bn': LanguageInfo('Bengali', True),
    'bs': LanguageInfo('Bosnian', True),
    'ca': LanguageInfo('Catalan', True),
    'ceb': LanguageInfo('Cebuano', True),
    'ku': LanguageInfo('Sorani-Kurdish', True),
    'cmn': LanguageInfo('Mandarin Chinese', True),
    'cs': LanguageInfo('Czech', True),
    'cy': LanguageInfo('Welsh', True),
    'da': LanguageInfo('Danish', True),
    'de': LanguageInfo('German', True),
    'el': LanguageInfo('Greek', True),
    'en': LanguageInfo('English', True),
    'es': LanguageInfo('Spanish', True),
    'et': LanguageInfo('Estonian', True),
    'fa': LanguageInfo('Persian', True),
    'ff': LanguageInfo('Fula', True),
    'fi': LanguageInfo('Finnish', True),
    'fil': LanguageInfo('Filipino', True),
    'fr': LanguageInfo('French', True),
    'ga': LanguageInfo('Irish', True),
    'gl': LanguageInfo('Galician', True),
    'gu': LanguageInfo('Gujarati', True),
    'ha': LanguageInfo('Hausa', True),
    'he': LanguageInfo('Hebrew', True),
    'hi': LanguageInfo('Hindi', True),
    'hr': LanguageInfo('Croatian', True),
    'hu': LanguageInfo('Hungarian', True),
    'hy': LanguageInfo('Armenian', True),
    'id': LanguageInfo('Indonesian', True),
    'ig': LanguageInfo('Igbo', True),
    'is': LanguageInfo('Icelandic', True),
    'it': LanguageInfo('Italian', True),
    'ja': LanguageInfo('Japanese', True),
    'jv': LanguageInfo('Javanese', True),
    'ka': LanguageInfo('Georgian', True),
    'kam': LanguageInfo('Kamba', True),
    'kea': LanguageInfo('Kabuverdianu', True),
    'kk': LanguageInfo('Kazakh', True),
    'km': LanguageInfo('Khmer', True),
    'kn': LanguageInfo('Kannada', True),
    'ko': LanguageInfo('Korean', True),
    'ky': LanguageInfo('Kyrgyz', True),
    'lb': LanguageInfo('Luxembourgish', True),
    'lg': LanguageInfo('Ganda', True),
    'ln': LanguageInfo('Lingala', True),
    'lo': LanguageInfo('Lao', True),
    'lt': LanguageInfo('Lithuanian', True),
    'luw': LanguageInfo('Luo', True),
    'lv': LanguageInfo('Latvian', True),
    'mi': LanguageInfo('Maori', True),
    'mk': LanguageInfo('Macedonian', True),
    'ml': LanguageInfo('Malayalam', True),
    'mn': LanguageInfo('Mongolian', True),
    'mr': LanguageInfo('Marathi', True),
    'ms': LanguageInfo('Malay', True),
    'mt': LanguageInfo('Maltese', True),
    'my': LanguageInfo('Burmese', True),
    'no': LanguageInfo('Norwegian', True),
    'ne': LanguageInfo('Nepali', True),
    'nl': LanguageInfo('Dutch', True),
    'nso': LanguageInfo('Northern-Sotho', True),
    'ny': LanguageInfo('Nyanja', True),
    'oc': LanguageInfo('Occitan', True),
    'om': LanguageInfo('Oromo', True),
    'or': LanguageInfo('Oriya', True),
    'pa': LanguageInfo('Punjabi', True),
    'pl': LanguageInfo('Polish', True),
    'ps': LanguageInfo('Pashto', True),
    'pt': LanguageInfo('Portuguese', True),
    'ro': LanguageInfo('Romanian', True),
    'ru': LanguageInfo('Russian', True),
    'sd': LanguageInfo('Sindhi', True),
    'sk': LanguageInfo('Slovak', True),
    'sl': LanguageInfo('Slovenian', True),
    'sn': LanguageInfo('Shona', True),
    'so': LanguageInfo('Somali', True),
    'sr': LanguageInfo('Serbian', True),
    'sv': LanguageInfo('Swedish', True),
    'sw': LanguageInfo('Swahili', True),
    'ta': LanguageInfo('Tamil', True),
    'te': LanguageInfo('Telugu', True),
    'tg': LanguageInfo('Tajik', True),
    'th': LanguageInfo('Thai', True),
    'tr': LanguageInfo('Turkish', True),
    'uk': LanguageInfo('Ukrainian', True),
    'umb': LanguageInfo('Umbundu', True),
    'ur': LanguageInfo('Urdu', True),
    'uz': LanguageInfo('Uzbek', True),
    'vi': LanguageInfo('Vietnamese', True),
    'wo': LanguageInfo('Wolof', True),
    'xh': LanguageInfo('Xhosa', True),
    'yo': LanguageInfo('Yoruba', True),
    'yue': LanguageInfo('Cantonese Chinese', True),
    'zu': LanguageInfo('Zulu', True),
    'ab': LanguageInfo('Abkhazian', False),
    'sq': LanguageInfo('Albanian', False),
    'bas': LanguageInfo('Basaa', False),
    'ba': LanguageInfo('Bashkir', False),
    'eu': LanguageInfo('Basque', False),
    'br': LanguageInfo('Breton', False),
    'cv': LanguageInfo('Chuvash', False),
    'mhr': LanguageInfo('Eastern Mari', False),
    'myv': LanguageInfo('Erzya', False),
    'eo': LanguageInfo('Esperanto', False),
    'gn': LanguageInfo('Guarani', False),
    'cnh': LanguageInfo('Hakha Chin', False),
    'ia': LanguageInfo('Interlingua', False),
    'rw': LanguageInfo('Kinyarwanda', False),
    'ltg': LanguageInfo('Latgalian', False),
    'nn': LanguageInfo('Norwegian Nynorsk', False),
    'rm': LanguageInfo('Romansh', False),
    'tt': LanguageInfo('Tatar', False),
    'tok': LanguageInfo('Toki Pona', False),
    'tk': LanguageInfo('Turkmen', False),
    'ug': LanguageInfo('Uighur', False),
    'hsb': LanguageInfo('Upper Sorbian', False),
    'fy': LanguageInfo('Western Frisian', False),
    'mrj': LanguageInfo('Western Mari', False),
    'sah': LanguageInfo('Yakut', False),
}
