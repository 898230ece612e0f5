"""Text preprocessing: stemming, stopwords, tokenization, lexicon."""

from .lexicon import Lexicon, build_lexicon, load_lexicon, save_lexicon, suggest_phrases
from .phrases import PhraseList, load_phrases, save_phrases
from .porter import stem
from .stoplist import default_stoplist, load_stoplist
from .tokenizer import author_token, author_tokens, text_tokens, tokenize

__all__ = [
    "Lexicon",
    "PhraseList",
    "author_token",
    "author_tokens",
    "build_lexicon",
    "default_stoplist",
    "load_lexicon",
    "load_phrases",
    "load_stoplist",
    "save_lexicon",
    "save_phrases",
    "stem",
    "suggest_phrases",
    "text_tokens",
    "tokenize",
]
