"""Tampering with witness documents: every mutation here must make --verify fail."""

import copy

SKIP_KEYS = {"id", "type"}


def _leaf_paths(value, path=()):
    if isinstance(value, dict):
        for key in sorted(value):
            if key not in SKIP_KEYS:
                yield from _leaf_paths(value[key], path + (key,))
    elif isinstance(value, list):
        yield path
        for i, item in enumerate(value):
            yield from _leaf_paths(item, path + (i,))
    else:
        yield path


def _get(doc, path):
    for key in path:
        doc = doc[key]
    return doc


def _set(doc, path, value):
    _get(doc, path[:-1])[path[-1]] = value


def tamper(value):
    """A different value of roughly the same shape."""
    if isinstance(value, bool):
        return not value
    if isinstance(value, int):
        return value + 1
    if isinstance(value, str):
        return value + "'"
    if isinstance(value, list):
        return value[:-1] if value else ["tampered"]
    return "tampered"


def leaf_mutation(doc, index: int, prefer=None):
    """Change one leaf of certificate ``index``; ``prefer`` picks a named field when present."""
    cert = doc["certificates"][index]
    paths = list(_leaf_paths(cert))
    if prefer is not None:
        chosen = [p for p in paths if p and p[-1] == prefer]
        paths = chosen or paths
    path = paths[0]
    out = copy.deepcopy(doc)
    _set(out["certificates"][index], path, tamper(_get(cert, path)))
    return out


def structural_mutations(doc):
    certs = doc["certificates"]
    yield "flipped verdict", {**copy.deepcopy(doc), "verdict": "no" if doc["verdict"] == "yes" else "yes"}
    if certs:
        yield "dropped first certificate", {**copy.deepcopy(doc), "certificates": certs[1:]}
        yield "dropped last certificate", {**copy.deepcopy(doc), "certificates": certs[:-1]}
        yield "duplicated certificate", {**copy.deepcopy(doc), "certificates": certs + certs[-1:]}
        renamed = copy.deepcopy(doc)
        renamed["certificates"][0]["id"] += "'"
        yield "renamed certificate", renamed
    if len(certs) > 1:
        swapped = copy.deepcopy(doc)
        swapped["certificates"][0], swapped["certificates"][-1] = certs[-1], certs[0]
        yield "reordered certificates", swapped


def per_type_mutations(doc):
    """One leaf change per certificate type, plus flipped invertibility flags."""
    seen = set()
    for i, cert in enumerate(doc["certificates"]):
        kind = cert["type"]
        if kind not in seen:
            seen.add(kind)
            yield f"{kind}: first field", leaf_mutation(doc, i)
        if kind == "lax-generic" and f"{kind}/flag" not in seen and cert["squares"]:
            seen.add(f"{kind}/flag")
            out = copy.deepcopy(doc)
            out["certificates"][i]["squares"][0][-1] = not cert["squares"][0][-1]
            yield f"{kind}: flipped invertibility flag", out
        if "theta_invertible" in cert and f"{kind}/theta" not in seen:
            seen.add(f"{kind}/theta")
            yield f"{kind}: flipped theta_invertible", leaf_mutation(doc, i, "theta_invertible")


def all_mutations(doc):
    yield from structural_mutations(doc)
    yield from per_type_mutations(doc)
    if doc.get("counterexample") is not None:
        out = copy.deepcopy(doc)
        out["counterexample"] = None
        yield "dropped counterexample", out
