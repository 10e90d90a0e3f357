// Fixture sets and sentence generators shared by the verification suites.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toda/cubical.hpp"
#include "toda/reducer.hpp"
#include "toda/sampled.hpp"

namespace toda {

/// A subset of a box with known homology.
struct HomologyFixture {
    std::string name;
    Formula formula;
    Box box;
    int resolution = 64;
    PoincarePolynomial expected;
    SampleConfig sampling;  // box already filled in
};

std::vector<HomologyFixture> homology_fixtures();

/// S subset of Y x Z; the join along Z should match the projection to Y
/// in degrees below p.
struct JoinFixture {
    std::string name;
    Formula phi;  // free blocks Y, Z
    int p = 1;
    Formula projection;  // free block Y, the image of S
    SampleConfig sampling;
};

std::vector<JoinFixture> join_fixtures();

enum class SentenceFamily { Sigma1, Pi1, Omega2 };

struct GeneratedSentence {
    std::string label;
    Formula formula;
    Truth expected = Truth::Unknown;  // brute-force truth
};

/// Random robust sentences: brute force must decide them at margin 0.1 and
/// agree at margin 0.05.  Roughly half true, half false.
std::vector<GeneratedSentence> generate_sentences(SentenceFamily family, int count, std::uint64_t seed);

/// forall Y in S^1, exists Z in S^1 over a conjunction of `atoms` closed atoms.
Formula size_input(int atoms, std::uint64_t seed);

}  // namespace toda
