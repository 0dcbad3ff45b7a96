import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genoq.errors import SequenceParseError
from genoq.genome import (
    build_window_db,
    decode_window,
    encode_base,
    encode_window,
    layout_for,
    next_power_of_two,
    parse_sequence,
    register_layout,
)

genomes = st.text(alphabet="ATGC", min_size=1, max_size=64)


def test_base_codes():
    assert encode_base("A") == "00"
    assert encode_base("T") == "01"
    assert encode_base("G") == "10"
    assert encode_base("C") == "11"


def test_base_round_trip():
    for b in "ATGC":
        assert decode_window(encode_base(b)) == b


def test_parse_fasta_header():
    assert parse_sequence(">x\nTATG") == "TATG"


def test_parse_case_folding():
    assert parse_sequence("atgc") == "ATGC"


def test_parse_rejects_ambiguity_codes():
    with pytest.raises(SequenceParseError) as exc:
        parse_sequence("ATN")
    assert exc.value.position == 3


def test_parse_multiline_whitespace():
    assert parse_sequence(">chr\nAT GC\nTT\n") == "ATGCTT"


def test_parse_empty():
    with pytest.raises(SequenceParseError):
        parse_sequence(">only header\n")


def test_window_db_toy():
    db = build_window_db("TATG", 1)
    assert db.count == 4
    assert [decode_window(w) for w in db.windows] == ["T", "A", "T", "G"]


def test_window_db_single_window():
    db = build_window_db("TATG", 4)
    assert db.count == 1
    assert db.windows[0] == encode_window("TATG")


def test_window_db_power_of_two_no_padding():
    db = build_window_db("ATGCATGCAT", 3)
    assert db.count == 8
    assert db.padded_size == 8
    assert not db.has_padding


def test_window_db_padding():
    db = build_window_db("ATGCA", 1)
    assert db.count == 5
    assert db.padded_size == 8
    assert db.has_padding


def test_window_db_bad_m():
    with pytest.raises(ValueError):
        build_window_db("ATG", 4)
    with pytest.raises(ValueError):
        build_window_db("ATG", 0)


@settings(max_examples=200)
@given(genomes, st.data())
def test_window_count_and_round_trip(genome, data):
    m = data.draw(st.integers(1, len(genome)))
    db = build_window_db(genome, m)
    assert db.count == len(genome) - m + 1
    for i, bits in enumerate(db.windows):
        assert decode_window(bits) == genome[i : i + m]
    assert db.padded_size == next_power_of_two(db.count)
    assert db.padded_size >= db.count
    assert db.padded_size < 2 * max(1, db.count)


def test_layout_human_genome_scale():
    layout = layout_for(3 * 10**9, 100)
    assert layout.index_qubits == 32
    assert layout.data_qubits == 200


def test_layout_toy():
    layout = register_layout(build_window_db("TATG", 1))
    assert (layout.index_qubits, layout.data_qubits) == (2, 2)
    assert layout.flag_qubits == 0
    assert layout.total == 4


def test_layout_exact_powers():
    layout = layout_for(10, 3)  # 8 windows
    assert (layout.index_qubits, layout.data_qubits) == (3, 6)
    assert layout.flag_qubits == 0


def test_layout_flag_only_with_padding():
    layout = layout_for(7, 1)  # 7 windows -> padded to 8
    assert layout.flag_qubits == 1
    assert layout.flag_qubit == 2
    assert layout.total == 3 + 1 + 2


def test_layout_amino_acid_variant():
    layout = layout_for(1024, 10, bits_per_symbol=5)
    assert layout.data_qubits == 50


def test_index_qubit_positions():
    layout = layout_for(7, 1)
    # data low, flag, then index qubits.
    assert [layout.index_qubit(j) for j in range(3)] == [3, 4, 5]


def test_csv_dump():
    db = build_window_db("TAT", 2)
    lines = db.to_csv().splitlines()
    assert lines[0] == "index,window_string,encoded_bits"
    assert lines[1] == "0,TA,0100"
    assert lines[2] == "1,AT,0001"
