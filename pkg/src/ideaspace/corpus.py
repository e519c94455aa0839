"""Parse, validate, and persist structured idea corpora.

An idea is a four-field record (title, action, object, context) plus a
unique id; ideas are grouped into sets, one set per problem statement.
The canonical on-disk format is JSON; CSV import is supported for
spreadsheet-born corpora.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import CorpusParseError, CorpusValidationError, TemplateError

IDEA_FIELDS = ("title", "action", "object", "context")

DEFAULT_TEMPLATE = "<title>. <action>. <object>. <context>."

_PLACEHOLDER = re.compile(r"<([^<>]+)>")


@dataclass(frozen=True)
class Idea:
    """One structured design idea."""

    id: str
    title: str
    action: str
    object: str
    context: str

    def __post_init__(self):
        for name in ("id",) + IDEA_FIELDS:
            value = getattr(self, name)
            if not isinstance(value, str) or not value.strip():
                raise CorpusValidationError(
                    f"idea {self.id!r}: field {name!r} is empty",
                    idea_id=self.id,
                    field=name,
                )
            object.__setattr__(self, name, value.strip())


@dataclass(frozen=True)
class IdeaSet:
    """An ordered collection of ideas answering one problem statement."""

    set_id: str
    problem_statement: str
    ideas: tuple[Idea, ...]

    def __post_init__(self):
        object.__setattr__(self, "ideas", tuple(self.ideas))
        if not self.set_id or not self.set_id.strip():
            raise CorpusValidationError("set_id is empty")
        object.__setattr__(self, "set_id", self.set_id.strip())
        if len(self.ideas) == 0:
            raise CorpusValidationError(f"set {self.set_id!r}: ideas list is empty")
        seen = set()
        for idea in self.ideas:
            if idea.id in seen:
                raise CorpusValidationError(
                    f"set {self.set_id!r}: duplicate idea id {idea.id!r}",
                    idea_id=idea.id,
                )
            seen.add(idea.id)

    def idea_ids(self) -> list[str]:
        return [idea.id for idea in self.ideas]


def _idea_from_record(record: dict, position: str) -> Idea:
    if not isinstance(record, dict):
        raise CorpusParseError("idea record is not an object", position=position)
    idea_id = record.get("id")
    if idea_id is None or (isinstance(idea_id, str) and not idea_id.strip()):
        raise CorpusValidationError(
            f"idea at {position}: missing field 'id'", field="id"
        )
    for name in IDEA_FIELDS:
        value = record.get(name)
        if value is None or (isinstance(value, str) and not value.strip()):
            raise CorpusValidationError(
                f"idea {idea_id!r}: missing field {name!r}",
                idea_id=str(idea_id),
                field=name,
            )
    return Idea(
        id=str(idea_id),
        title=str(record["title"]),
        action=str(record["action"]),
        object=str(record["object"]),
        context=str(record["context"]),
    )


def _parse_json(text: str) -> list[IdeaSet]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusParseError(
            f"malformed JSON: {exc.msg}", position=f"line {exc.lineno}, column {exc.colno}"
        ) from exc
    if not isinstance(payload, dict) or "sets" not in payload:
        raise CorpusParseError("top-level object must contain a 'sets' array")
    sets = []
    for si, raw_set in enumerate(payload["sets"]):
        if not isinstance(raw_set, dict):
            raise CorpusParseError("set entry is not an object", position=f"sets[{si}]")
        ideas = [
            _idea_from_record(rec, f"sets[{si}].ideas[{ri}]")
            for ri, rec in enumerate(raw_set.get("ideas", []))
        ]
        sets.append(
            IdeaSet(
                set_id=str(raw_set.get("set_id", "")),
                problem_statement=str(raw_set.get("problem_statement", "")),
                ideas=tuple(ideas),
            )
        )
    return sets


def _parse_csv(text: str) -> list[IdeaSet]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise CorpusParseError("empty CSV input")
    missing = [c for c in ("id",) + IDEA_FIELDS if c not in reader.fieldnames]
    if missing:
        raise CorpusParseError(f"CSV header missing columns: {', '.join(missing)}")
    # Optional set_id / problem_statement columns group rows into sets;
    # without them the file is a single set.
    grouped: dict[str, tuple[str, list[Idea]]] = {}
    for row_no, row in enumerate(reader, start=2):
        if all(v is None or not str(v).strip() for v in row.values()):
            continue
        set_id = (row.get("set_id") or "csv-import").strip()
        statement = (row.get("problem_statement") or "").strip()
        idea = _idea_from_record(
            {k: row.get(k) for k in ("id",) + IDEA_FIELDS}, f"line {row_no}"
        )
        if set_id not in grouped:
            grouped[set_id] = (statement, [])
        grouped[set_id][1].append(idea)
    if not grouped:
        raise CorpusParseError("CSV contains no idea rows")
    return [
        IdeaSet(set_id=sid, problem_statement=stmt, ideas=tuple(ideas))
        for sid, (stmt, ideas) in grouped.items()
    ]


def parse_corpus(raw: bytes | str, format: str = "json") -> list[IdeaSet]:
    """Parse a corpus file into validated idea sets.

    Raises CorpusParseError for malformed input (with position where
    known) and CorpusValidationError for records that violate an
    invariant.
    """
    if isinstance(raw, bytes):
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorpusParseError(f"input is not valid UTF-8: {exc}") from exc
    else:
        text = raw
    if format == "json":
        return _parse_json(text)
    if format == "csv":
        return _parse_csv(text)
    raise ValueError(f"unknown corpus format {format!r}")


def serialize_corpus(sets: list[IdeaSet]) -> str:
    """Serialize idea sets to canonical JSON; inverse of parse_corpus."""
    payload = {
        "sets": [
            {
                "set_id": s.set_id,
                "problem_statement": s.problem_statement,
                "ideas": [
                    {
                        "id": i.id,
                        "title": i.title,
                        "action": i.action,
                        "object": i.object,
                        "context": i.context,
                    }
                    for i in s.ideas
                ],
            }
            for s in sets
        ]
    }
    return json.dumps(payload, indent=2, ensure_ascii=False)


def render_idea_text(idea: Idea, template: str = DEFAULT_TEMPLATE) -> str:
    """Render an idea to the text that gets embedded.

    The template references fields as ``<title>``, ``<action>``,
    ``<object>``, ``<context>``; anything else is a TemplateError.
    """
    def substitute(match: re.Match) -> str:
        name = match.group(1)
        if name not in IDEA_FIELDS:
            raise TemplateError(f"template references unknown field {name!r}")
        return getattr(idea, name)

    return _PLACEHOLDER.sub(substitute, template)


def corpus_texts(
    idea_set: IdeaSet,
    template: str = DEFAULT_TEMPLATE,
    include_problem_statement: bool = False,
) -> list[str]:
    """Embeddable text for every idea in a set, in set order.

    ``include_problem_statement`` prepends the set's problem statement to
    each idea text; off by default.
    """
    texts = [render_idea_text(idea, template) for idea in idea_set.ideas]
    if include_problem_statement and idea_set.problem_statement:
        texts = [f"{idea_set.problem_statement}. {t}" for t in texts]
    return texts


# --- synthetic fixtures -----------------------------------------------------

_THEMES = [
    ("waste segregation", ["bin", "bag", "sensor", "compost", "recycle", "sorter"]),
    ("umbrella drying", ["stand", "dryer", "rack", "sleeve", "spinner", "case"]),
    ("shoe hygiene", ["mat", "spray", "cabinet", "brush", "steamer", "tray"]),
    ("dish cleaning", ["scrubber", "nozzle", "dispenser", "basin", "glove", "coating"]),
    ("queue comfort", ["stool", "roller", "barrier", "insole", "canopy", "bench"]),
    ("bird feeding", ["feeder", "perch", "camera", "fountain", "birdhouse", "chime"]),
]

_VERBS = ["cleans", "sorts", "dries", "guides", "monitors", "supports", "warms", "filters"]
_QUALIFIERS = ["portable", "modular", "solar", "smart", "foldable", "quiet", "durable", "compact"]
_SETTINGS = ["at home", "in offices", "outdoors", "in public spaces", "on travel", "in gardens"]


def synthesize_corpus(
    n_sets: int = 6, n_ideas: int = 100, seed: int = 0, n_themes_per_set: int = 5
) -> list[IdeaSet]:
    """Generate a deterministic synthetic corpus for tests and demos.

    Each set draws its ideas from a handful of sub-theme token pools so the
    embedded corpus has clusterable structure.
    """
    rng = np.random.default_rng(seed)
    sets = []
    for si in range(n_sets):
        theme, objects = _THEMES[si % len(_THEMES)]
        sub_objects = [objects[k % len(objects)] for k in range(n_themes_per_set)]
        ideas = []
        for ii in range(n_ideas):
            obj = sub_objects[int(rng.integers(len(sub_objects)))]
            verb = _VERBS[int(rng.integers(len(_VERBS)))]
            qual = _QUALIFIERS[int(rng.integers(len(_QUALIFIERS)))]
            setting = _SETTINGS[int(rng.integers(len(_SETTINGS)))]
            ideas.append(
                Idea(
                    id=f"{si + 1}-{ii + 1}",
                    title=f"{qual.capitalize()} {obj} {ii + 1}",
                    action=f"{verb} for {theme}",
                    object=obj,
                    context=f"{qual} {obj} that {verb} {setting}",
                )
            )
        sets.append(
            IdeaSet(
                set_id=f"set-{si + 1}",
                problem_statement=f"Product for {theme}",
                ideas=tuple(ideas),
            )
        )
    return sets
