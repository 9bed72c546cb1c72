"""JSON Schemas for every structured output the CLI emits."""

NUMBER_OR_INF = {"anyOf": [{"type": "number"}, {"enum": ["inf", "-inf"]}]}
VERDICT = {"enum": ["HoldsBySufficientCondition", "NotImplied", "OutOfTheoremScope"]}

DECISION = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "afl-decision/1",
    "type": "object",
    "required": ["schema", "continuity", "compactness", "margin", "method", "diagnostics"],
    "properties": {
        "schema": {"const": "afl-decision/1"},
        "continuity": VERDICT,
        "compactness": VERDICT,
        "margin": {"type": "number"},
        "method": {"type": "string"},
        "diagnostics": {"type": "object"},
    },
}

REPORT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "afl-report/1",
    "type": "object",
    "required": ["schema", "suite", "seed", "grid", "cases", "passed", "runtime"],
    "properties": {
        "schema": {"const": "afl-report/1"},
        "suite": {"type": "string"},
        "seed": {"type": "integer"},
        "grid": {"type": "array"},
        "cases": {
            "type": "array",
            "items": {"type": "object", "required": ["tolerance", "passed"],
                      "properties": {"passed": {"type": "boolean"}}},
        },
        "passed": {"type": "boolean"},
        "runtime": {"type": "number", "minimum": 0},
        "metadata": {"type": "object"},
    },
}

COEFFICIENTS = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "afl-coefficients/1",
    "type": "object",
    "required": ["schema", "n", "mu_max", "k_max", "coefficients"],
    "properties": {
        "schema": {"const": "afl-coefficients/1"},
        "n": {"type": "integer", "minimum": 2},
        "mu_max": {"type": "integer", "minimum": 0},
        "k_max": {"type": "integer", "minimum": 1},
        "metadata": {"type": "object"},
        "coefficients": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
    },
}

ZEROS = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "afl-zeros/1",
    "type": "object",
    "required": ["schema", "nu", "zeros"],
    "properties": {
        "schema": {"const": "afl-zeros/1"},
        "nu": {"type": "number"},
        "zeros": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
    },
}

NORM = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "afl-norm/1",
    "type": "object",
    "required": ["schema", "space", "value", "bands", "band_values"],
    "properties": {
        "schema": {"const": "afl-norm/1"},
        "space": {"type": "object"},
        "value": {"type": "number", "minimum": 0},
        "bands": {"type": "array", "items": {"type": "integer"}},
        "band_values": {"type": "array", "items": {"type": "number"}},
        "truncated_sup": {"type": "boolean"},
        "spectrum_tail": {"type": "number"},
    },
}

RECONSTRUCTION = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "afl-reconstruction/1",
    "type": "object",
    "required": ["schema", "n", "mu_max", "k_max", "l2_norm"],
    "properties": {
        "schema": {"const": "afl-reconstruction/1"},
        "n": {"type": "integer"},
        "mu_max": {"type": "integer"},
        "k_max": {"type": "integer"},
        "l2_norm": {"type": "number", "minimum": 0},
        "rel_error": {"type": ["number", "null"]},
        "source_profile": {"type": ["object", "null"]},
    },
}

SCHEMAS = {s["title"]: s for s in (DECISION, REPORT, COEFFICIENTS, ZEROS, NORM, RECONSTRUCTION)}
