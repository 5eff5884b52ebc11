#include <math.h>
#include <stdio.h>
#include <string.h>

#include "attrib.h"

#define CHECK(cond)                                                    \
    do {                                                               \
        if (!(cond)) {                                                 \
            fprintf(stderr, "check failed line %d: %s\n", __LINE__, #cond); \
            return 1;                                                  \
        }                                                              \
    } while (0)

int main(void) {
    const char *csv = "date,FX,EQ\n2002-12-31,0.95,880\n2003-12-31,0.79,1110\n";
    AttribPanel *panel = NULL;
    AttribModel *model = NULL;
    AttribResult *result = NULL;

    CHECK(attrib_panel_from_csv(csv, &panel) == ATTRIB_STATUS_OK);
    CHECK(attrib_model_hedged(0.95, 880.0, &model) == ATTRIB_STATUS_OK);
    CHECK(attrib_decompose(model, panel, "2002-12-31", "2003-12-31", ATTRIB_GRANULARITY_ANNUAL,
                           ATTRIB_METHOD_ASU, NULL, 0, &result) == ATTRIB_STATUS_OK);
    CHECK(attrib_result_num_factors(result) == 2);
    CHECK(strcmp(attrib_result_factor_name(result, 0), "FX") == 0);

    double x = 0.0;
    CHECK(attrib_result_contribution(result, 0, &x) == ATTRIB_STATUS_OK);
    CHECK(fabs(x + 18.4) < 1e-9);
    CHECK(fabs(attrib_result_delta_p(result) - 181.7) < 1e-9);

    const char *order[] = {"EQ", "NOPE"};
    AttribResult *bad = NULL;
    CHECK(attrib_decompose(model, panel, "2002-12-31", "2003-12-31", ATTRIB_GRANULARITY_ANNUAL,
                           ATTRIB_METHOD_SU, order, 2, &bad) == ATTRIB_STATUS_DATA);
    CHECK(bad == NULL);
    CHECK(attrib_last_error() != NULL);

    attrib_result_free(result);
    attrib_model_free(model);
    attrib_panel_free(panel);
    printf("ok %s\n", attrib_version());
    return 0;
}
