// Plays a few rounds of the parity game with the 12-qubit state while every
// player's lab is rotated by an independent random unitary, and prints each
// player's measurement transcript.

#include <iostream>

#include "ghzframe/ghzframe.hpp"

int main() {
  using namespace ghzframe;
  for (std::uint64_t i = 0; i < 4; ++i) {
    RngStream rng(trial_seed(7, i));
    const auto questions = referee_draw(rng);
    const auto record = play_frame_free(questions, rng, Adversary::scramble_all);
    std::cout << "questions " << questions.str() << "  answers " << record.answers[0] << record.answers[1]
              << record.answers[2] << "  " << (record.win ? "win" : "loss") << "\n";
    for (std::size_t p = 0; p < 3; ++p) {
      std::cout << "  player " << p + 1 << ":";
      for (const auto& e : record.transcripts[p].transcript) {
        std::cout << " q" << e.qubit << '/' << basis_letter(e.basis) << '=' << e.outcome;
      }
      std::cout << "\n";
    }
  }
}
