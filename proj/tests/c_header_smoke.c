/* Compiles the public header as C and runs a minimal session. */
#include <stdio.h>

#include "thirdq/thirdq.h"

int main(void) {
  thirdq_chain* chain = NULL;
  thirdq_model* model = NULL;
  thirdq_complex rap[8];
  if (thirdq_chain_homogeneous(4, 1.0, 0.5, 0.8, 1.0, 0.5, 0.7, 0.2, &chain) != THIRDQ_OK) return 1;
  if (thirdq_model_from_chain(chain, &model) != THIRDQ_OK) return 1;
  if (thirdq_model_rapidities(model, rap, 8) != THIRDQ_OK) return 1;
  printf("leading rapidity %.6f%+.6fi\n", rap[0].re, rap[0].im);
  thirdq_model_free(model);
  thirdq_chain_free(chain);
  return rap[0].re > 0.0 ? 0 : 1;
}
