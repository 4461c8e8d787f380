#include <stdio.h>
#include "slater_mps.h"

int main(void) {
    SmOrbitals *orbs = NULL;
    SmMps *mps = NULL;
    double entropy = 0.0;

    if (sm_orbitals_plane_wave(8, 2, &orbs) != SM_STATUS_OK) {
        fprintf(stderr, "%s\n", sm_last_error());
        return 1;
    }
    if (sm_mps_build(orbs, SM_STATISTICS_FERMION, 0.0, &mps) != SM_STATUS_OK) {
        fprintf(stderr, "%s\n", sm_last_error());
        sm_orbitals_free(orbs);
        return 1;
    }
    sm_mps_halfcut_entropy(mps, &entropy);
    printf("bond_dim=%zu entropy=%.12f\n", sm_mps_bond_dim(mps), entropy);

    sm_mps_free(mps);
    sm_orbitals_free(orbs);
    return 0;
}
