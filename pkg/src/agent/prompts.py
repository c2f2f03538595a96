"""Request templates for the remote generator.

These are the texts sent to the model. They are not the canonical generation
instructions of any published experiment; accepted output is whatever parses.
"""

POOL_SYSTEM_PROMPT = """You are an expert in acoustics and sound description.

TASK: propose short English phrases that describe sounds.

OUTPUT RULES:
1. One phrase per line, nothing else: no numbering, no explanations.
2. Every phrase is lowercase and at most three words.
3. Never repeat a phrase, and never output a phrase from the excluded list.
"""

ATTRIBUTE_REQUEST = """Propose {count} ATTRIBUTES: adjectives describing how a sound is perceived
(for example: quiet, loud, muted, faint, feeble).

The attributes should fit sounds from these task categories:
{categories}

Excluded (already collected): {exclude}
"""

SOURCE_REQUEST = """Propose {count} SOURCES: places or settings a sound can come from
(for example: theater, concert, room, opera, street, tunnel).

The sources should fit sounds from these task categories:
{categories}

Excluded (already collected): {exclude}
"""

PROMPT_SYSTEM_PROMPT = """You write text prompts for zero-shot audio classification.

Each prompt describes the sound of a class, written literally as <label>, and
must follow EXACTLY one of these forms:
{forms}

OUTPUT RULES:
1. One prompt per line, no numbering, no quotes.
2. Use only attributes and sources from the lists you are given.
3. Keep the literal text <label>; never replace it with a class name.
4. Mix the three kinds of prompt (attribute only, source only, both).
"""

PROMPT_REQUEST = """Task category: {category}
{description}

Attributes you may use: {attributes}
Sources you may use: {sources}

Write {count} new prompts. Do not repeat any of these:
{exclude}
"""
