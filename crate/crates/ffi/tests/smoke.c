#include <stdio.h>
#include "nilreg.h"
int main(void) {
    NilregCatalog *cat = NULL;
    size_t d = 0;
    if (nilreg_catalog_builtin(&cat) != NILREG_STATUS_OK) return 1;
    if (nilreg_bass_guivarch(cat, "N3", &d) != NILREG_STATUS_OK || d != 4) return 2;
    if (nilreg_bass_guivarch(cat, "X", &d) != NILREG_STATUS_CATALOG) return 3;
    printf("%s\n", nilreg_last_error());
    nilreg_catalog_free(cat);
    return 0;
}
