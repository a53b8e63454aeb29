#ifndef GAMEDYN_TESTS_TOY_H_
#define GAMEDYN_TESTS_TOY_H_

#include "gamedyn/game.h"

// 2x2 potential game: psi(0,0)=1, psi(0,1)=0, psi(1,0)=0, psi(1,1)=2.
inline gamedyn::Game toy_game() {
  return gamedyn::Game::from_potential(2, 2, {1.0, 0.0, 0.0, 2.0});
}

#endif  // GAMEDYN_TESTS_TOY_H_
