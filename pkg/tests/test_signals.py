import json

import pytest
from hypothesis import given, strategies as st

from needsense.errors import TraceParseError
from needsense.signals import (
    ACTIONS,
    BUTTONS,
    KINDS,
    OUTPUTS,
    AudioSnapshot,
    ButtonPress,
    SettingChange,
    SignalEvent,
    Trace,
    TraceMeta,
    UIAction,
    ViewingDistance,
    filter_signal,
    parse_trace,
    serialize_trace,
)


def test_single_distance_record():
    trace = parse_trace('{"t":0,"kind":"viewing_distance","m":0.36}\n')
    assert len(trace) == 1
    ev = trace.events[0]
    assert ev.t == 0.0
    assert ev.payload == ViewingDistance(0.36)


def test_empty_document():
    assert len(parse_trace("")) == 0
    assert len(parse_trace("\n\n")) == 0


def test_non_monotone_timestamp_reports_line():
    doc = '{"t":5,"kind":"button","button":"side"}\n{"t":3,"kind":"button","button":"side"}\n'
    with pytest.raises(TraceParseError, match="non-monotone timestamp at line 2") as exc:
        parse_trace(doc)
    assert exc.value.line == 2


def test_equal_timestamps_keep_document_order():
    doc = '{"t":1,"kind":"button","button":"side"}\n{"t":1,"kind":"button","button":"home"}\n'
    trace = parse_trace(doc)
    assert [e.payload.button for e in trace] == ["side", "home"]


@pytest.mark.parametrize("record", [
    {"t": 0, "kind": "audio", "playing": True, "volume": 1.2, "output": "speaker"},
    {"t": 0, "kind": "audio", "playing": True, "volume": -0.01, "output": "speaker"},
    {"t": 0, "kind": "audio", "playing": "yes", "volume": 0.5, "output": "speaker"},
    {"t": 0, "kind": "audio", "playing": True, "volume": 0.5, "output": "radio"},
    {"t": 0, "kind": "teleport"},
    {"t": 0, "kind": "viewing_distance", "m": 0},
    {"t": 0, "kind": "viewing_distance", "m": "far"},
    {"t": -1, "kind": "viewing_distance", "m": 0.3},
    {"t": True, "kind": "viewing_distance", "m": 0.3},
    {"kind": "viewing_distance", "m": 0.3},
    {"t": 0, "kind": "button", "button": "power"},
    {"t": 0, "kind": "ui_action", "action": "dance"},
    {"t": 0, "kind": "setting", "feature": "Bold Text", "enabled": True},
    {"t": 0, "kind": "setting", "feature": "bold_text"},
    [1, 2, 3],
])
def test_invalid_records(record):
    with pytest.raises(TraceParseError) as exc:
        parse_trace(json.dumps(record) + "\n")
    assert exc.value.line == 1


def test_non_finite_rejected():
    with pytest.raises(TraceParseError):
        parse_trace('{"t":NaN,"kind":"viewing_distance","m":0.3}')


def test_strict_rejects_extra_fields_lenient_allows():
    doc = '{"t":0,"kind":"viewing_distance","m":0.3,"confidence":0.9}\n'
    with pytest.raises(TraceParseError, match="confidence"):
        parse_trace(doc)
    assert parse_trace(doc, lenient=True).events[0].payload.meters == 0.3


def test_bad_json_and_bad_utf8():
    with pytest.raises(TraceParseError) as exc:
        parse_trace('{"t":0,"kind":"button","button":"side"}\n{oops\n')
    assert exc.value.line == 2
    with pytest.raises(TraceParseError):
        parse_trace(b'{"t":0,"kind":"button","button":"\xff"}')


def test_meta_line():
    doc = '{"meta":{"session_id":"s1","initial_settings":["larger_text"]}}\n{"t":0,"kind":"button","button":"side"}\n'
    trace = parse_trace(doc)
    assert trace.meta == TraceMeta(None, "s1", ("larger_text",))
    assert trace.initial_settings == ("larger_text",)


def test_meta_must_come_first():
    doc = '{"t":0,"kind":"button","button":"side"}\n{"meta":{}}\n'
    with pytest.raises(TraceParseError, match="line 2"):
        parse_trace(doc)


def test_filter_signal():
    trace = Trace((
        SignalEvent(0, ViewingDistance(0.3)),
        SignalEvent(1, AudioSnapshot(True, 0.5)),
        SignalEvent(2.5, ViewingDistance(0.4)),
    ))
    got = filter_signal(trace, "viewing_distance")
    assert [t for t, _ in got] == [0.0, 2.5]
    assert filter_signal(trace, "button") == []


def test_trace_rejects_unordered_events():
    with pytest.raises(ValueError):
        Trace((SignalEvent(2, ButtonPress("side")), SignalEvent(1, ButtonPress("side"))))


# -- properties ----------------------------------------------------------------

feature_ids = st.from_regex(r"[a-z][a-z0-9_]{0,12}", fullmatch=True)
payloads = st.one_of(
    st.floats(min_value=1e-6, max_value=10, allow_nan=False).map(ViewingDistance),
    st.builds(AudioSnapshot, st.booleans(), st.floats(0, 1), st.sampled_from(OUTPUTS)),
    st.sampled_from(BUTTONS).map(ButtonPress),
    st.builds(UIAction, st.sampled_from(ACTIONS), st.one_of(st.none(), st.text(max_size=8))),
    st.builds(SettingChange, feature_ids, st.booleans()),
)


@st.composite
def traces(draw):
    gaps = draw(st.lists(st.floats(0, 100, allow_nan=False), max_size=30))
    t, events = 0.0, []
    for g in gaps:
        t += g
        events.append(SignalEvent(t, draw(payloads)))
    meta = draw(st.one_of(
        st.none(),
        st.builds(TraceMeta, st.one_of(st.none(), st.text(max_size=5)), st.one_of(st.none(), st.text(max_size=5)),
                  st.lists(feature_ids, max_size=3).map(tuple)),
    ))
    return Trace(tuple(events), meta)


@given(traces())
def test_round_trip_identity(trace):
    text = serialize_trace(trace)
    assert parse_trace(text) == trace
    assert serialize_trace(parse_trace(text)) == text


@given(traces())
def test_filter_partitions_trace(trace):
    assert sum(len(filter_signal(trace, k)) for k in KINDS) == len(trace)
