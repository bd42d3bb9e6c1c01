#include <stdio.h>
#include <string.h>

#include "gsplit.h"

static const char *INSTANCE =
    "[group]\nfamily = free\nrank = 2\n\n"
    "[subgroup H]\ngenerators = aa\n";

int main(void) {
    GsGroup *g = NULL;
    if (gs_group_new(GS_FAMILY_FREE, 2, &g) != GS_STATUS_OK) return 1;
    char *nf = NULL;
    if (gs_group_normal_form(g, "abBA a", &nf) != GS_STATUS_OK) return 2;
    if (strcmp(nf, "a") != 0) return 3;
    gs_string_free(nf);
    uint64_t n = 0;
    if (gs_ball_size(g, 3, &n) != GS_STATUS_OK || n != 53) return 4;
    gs_group_free(g);

    GsInstance *inst = NULL;
    if (gs_instance_parse(INSTANCE, &inst) != GS_STATUS_OK) return 5;
    GsTri t;
    char *witness = NULL;
    if (gs_subgroup_malnormal(inst, "H", &t, &witness) != GS_STATUS_OK) return 6;
    if (t != GS_TRI_NO || strcmp(witness, "a") != 0) return 7;
    gs_string_free(witness);
    if (gs_subgroup_member(inst, "H", "zz", &t) != GS_STATUS_ERROR) return 8;
    printf("%s\n", gs_last_error());
    gs_instance_free(inst);
    return 0;
}
