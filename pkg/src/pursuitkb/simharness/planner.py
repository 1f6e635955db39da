"""Greedy action planning for one typing trial.

The planner walks the target phrase and decides, step by step, which key
the simulated user pursues next: a matching prediction arrow when one is
visible and the adoption draw succeeds, otherwise the next needed letter
(or SP when the word is complete). Each intended action gets exactly one
slip draw; a slipped letter-cluster action is followed by reliable
recovery actions (one DEL plus a retype), while a slipped arrow commits a
wrong word that is never corrected, matching the task instruction that
prediction errors stay in the transcript.

The planner mirrors the engine's text/prediction semantics exactly (same
``predict_set`` / ``apply_word_selection`` / travel rules), so a noiseless
rendering of the plan commits precisely the planned key sequence.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..layout import InterfaceLayout
from ..prediction import (
    LanguageModel,
    PREDICTION_SLOTS,
    SLOT_BY_ARROW,
    apply_word_selection,
    lp_travel,
    predict_set,
    split_buffer,
)
from .user import UserModel

ARROW_FOR_SLOT = {"up": "ARROW_UP", "left": "ARROW_LEFT", "right": "ARROW_RIGHT"}

TAG_INTENDED = "intended"
TAG_RECOVERY = "recovery"


class PlanError(ValueError):
    pass


@dataclass(frozen=True)
class Action:
    """One pursuit the user will perform (after any slip was resolved)."""

    key_id: str
    cluster_index: int
    travel_px: float
    tag: str
    scan_predictions: bool
    slipped: bool = False


class _PlanState:
    def __init__(self, layout: InterfaceLayout, model: LanguageModel) -> None:
        self.layout = layout
        self.model = model
        self.keys = layout.keys_by_id
        self.buffer = ""
        self.actions: list[Action] = []

    def emit(self, key_id: str, tag: str, scan: bool, slipped: bool = False) -> str | None:
        """Append one action and apply its buffer effect; returns a deleted char."""
        preds = predict_set(self.model, self.buffer, self.layout.variant)
        key = self.keys[key_id]
        travel = lp_travel(self.layout, key, preds.top_letters)
        self.actions.append(
            Action(key_id, key.cluster_index, travel, tag, scan, slipped)
        )
        deleted = None
        if key_id == "SP":
            self.buffer += " "
        elif key_id == "DEL":
            if self.buffer:
                deleted = self.buffer[-1]
                self.buffer = self.buffer[:-1]
        elif key.is_arrow:
            slot = SLOT_BY_ARROW[key_id]
            if preds.slot_map.get(slot, ""):
                self.buffer, _ = apply_word_selection(self.buffer, slot, preds)
        else:
            self.buffer += key_id.lower()
        return deleted


def plan_actions(
    phrase: str,
    layout: InterfaceLayout,
    model: LanguageModel,
    user: UserModel,
    rng,
) -> list[Action]:
    phrase = phrase.lower()
    if not phrase or any(c != " " and not "a" <= c <= "z" for c in phrase):
        raise PlanError("phrase must contain only letters a-z and spaces")
    words = phrase.split()
    if not words:
        raise PlanError("phrase has no words")

    st = _PlanState(layout, model)
    scanning = layout.variant == "L_WP"
    wi = 0
    budget = 60 * (len(phrase) + 2)
    while wi < len(words):
        budget -= 1
        if budget < 0:
            raise PlanError("plan did not converge")
        target = words[wi]
        preds = predict_set(model, st.buffer, layout.variant)
        prefix = split_buffer(st.buffer)[1]

        intended = None
        if scanning:
            for slot in PREDICTION_SLOTS:
                if preds.slot_map.get(slot, "") == target:
                    if rng.random() < user.prediction_adoption_prob:
                        intended = ARROW_FOR_SLOT[slot]
                    break
        if intended is None:
            intended = "SP" if prefix == target else target[len(prefix)].upper()

        actual = intended
        if user.slip_prob > 0.0 and rng.random() < user.slip_prob:
            actual = _fan_neighbor(layout, intended, rng)

        was_arrow_intent = st.keys[intended].is_arrow
        before = st.buffer
        deleted = st.emit(actual, TAG_INTENDED, scanning, slipped=actual != intended)

        if actual == intended:
            if intended == "SP" or was_arrow_intent:
                wi += 1
            continue

        if was_arrow_intent:
            # Arrow slip: either a wrong word went in (kept by policy) or the
            # slot was empty and nothing happened (retry next round).
            if st.buffer != before:
                wi += 1
            continue

        # Letter-cluster slip: one reliable correction, then the intended key.
        if actual == "DEL":
            if deleted is not None:
                st.emit(deleted.upper() if deleted != " " else "SP", TAG_RECOVERY, False)
        else:
            st.emit("DEL", TAG_RECOVERY, False)
        st.emit(intended, TAG_RECOVERY, False)
        if intended == "SP":
            wi += 1

    return st.actions


def _fan_neighbor(layout: InterfaceLayout, key_id: str, rng) -> str:
    """A fan-adjacent key in the same cluster (the realistic slip target)."""
    cluster = layout.clusters[layout.keys_by_id[key_id].cluster_index]
    ids = [k.id for k in cluster.keys]
    i = ids.index(key_id)
    options = [j for j in (i - 1, i + 1) if 0 <= j < len(ids)]
    return ids[options[int(rng.integers(len(options)))]]
